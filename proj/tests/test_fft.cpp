#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "dmdcf/core/fft.hpp"
#include "oracles/naive_dft.hpp"
#include "test_util.hpp"

using namespace dmdcf;

namespace {

double rel_error(const ComplexArray& a, const ComplexArray& b) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

}  // namespace

TEST_CASE("fft2 matches direct DFT on assorted shapes") {
  std::mt19937 rng(11);
  for (auto [rows, cols] : {std::pair{4, 4}, {8, 8}, {6, 10}, {7, 5}, {1, 16}, {13, 3}}) {
    RealArray x = testing::random_real(rows, cols, rng);
    ComplexArray fast = fft2(x);
    ComplexArray slow = oracle::naive_dft2(x);
    REQUIRE(rel_error(fast, slow) < 1e-12);
  }
}

TEST_CASE("ifft2 inverts fft2") {
  std::mt19937 rng(12);
  RealArray x = testing::random_real(24, 18, rng);
  RealArray back = ifft2_real(fft2(x));
  for (size_t i = 0; i < x.size(); ++i)
    REQUIRE_THAT(back[i], Catch::Matchers::WithinAbs(x[i], 1e-12));
}

TEST_CASE("Parseval identity holds") {
  std::mt19937 rng(13);
  RealArray x = testing::random_real(16, 22, rng);
  ComplexArray spectrum = fft2(x);
  double spatial = 0.0;
  for (double v : x) spatial += v * v;
  double fourier = 0.0;
  for (const Complex& v : spectrum) fourier += std::norm(v);
  REQUIRE_THAT(fourier, Catch::Matchers::WithinRel(spatial * x.size(), 1e-12));
}

TEST_CASE("Fourier-domain correlation equals brute-force circular correlation") {
  std::mt19937 rng(14);
  for (int trial = 0; trial < 4; ++trial) {
    RealArray t = testing::random_real(32, 32, rng);
    RealArray x = testing::random_real(32, 32, rng);

    ComplexArray t_hat = fft2(t);
    ComplexArray x_hat = fft2(x);
    ComplexArray prod(32, 32);
    for (size_t i = 0; i < prod.size(); ++i) prod[i] = std::conj(t_hat[i]) * x_hat[i];
    RealArray fourier_route = ifft2_real(prod);

    RealArray brute = oracle::circular_correlation(t, x);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < brute.size(); ++i) {
      num += (fourier_route[i] - brute[i]) * (fourier_route[i] - brute[i]);
      den += brute[i] * brute[i];
    }
    REQUIRE(std::sqrt(num / den) < 1e-8);
  }
}
