#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "dmdcf/dcf.hpp"
#include "oracles/dense_ridge.hpp"
#include "oracles/naive_dft.hpp"
#include "test_util.hpp"

using namespace dmdcf;

namespace {

FeatureStack stack_of(std::vector<RealArray> channels) {
  FeatureStack s;
  s.channels = std::move(channels);
  s.labels.assign(s.channels.size(), ChannelSource::kGray);
  return s;
}

double rel_error(const RealArray& a, const RealArray& b) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("desired output peaks at the origin with unit value") {
  ComplexArray y_hat = make_desired_output(24, 32, 2.0);
  RealArray y = ifft2_real(y_hat);
  double best = -1.0;
  int br = -1, bc = -1;
  for (int r = 0; r < 24; ++r)
    for (int c = 0; c < 32; ++c)
      if (y(r, c) > best) {
        best = y(r, c);
        br = r;
        bc = c;
      }
  REQUIRE(br == 0);
  REQUIRE(bc == 0);
  REQUIRE_THAT(best, Catch::Matchers::WithinAbs(1.0, 1e-9));
}

TEST_CASE("desired output decays like a Gaussian") {
  const double sigma = 1.5;
  ComplexArray y_hat = make_desired_output(32, 32, sigma);
  RealArray y = ifft2_real(y_hat);
  const int d = static_cast<int>(std::ceil(3.0 * sigma));
  REQUIRE(y(d, 0) < std::exp(-4.5) + 1e-9);
  REQUIRE(y(0, d) < std::exp(-4.5) + 1e-9);
}

TEST_CASE("desired output sums to the Gaussian integral") {
  const double sigma = 2.0;
  ComplexArray y_hat = make_desired_output(32, 48, sigma);
  RealArray y = ifft2_real(y_hat);
  REQUIRE_THAT(sum(y), Catch::Matchers::WithinRel(2.0 * M_PI * sigma * sigma, 0.01));
}

TEST_CASE("desired output rejects non-positive sigma") {
  REQUIRE_THROWS_AS(make_desired_output(16, 16, 0.0), ConfigError);
}

TEST_CASE("training then responding on the same sample reproduces the target") {
  std::mt19937 rng(41);
  FeatureStack x = stack_of({testing::random_real(16, 16, rng)});
  ComplexArray y_hat = make_desired_output(16, 16, 1.5);
  FilterBank bank = train_closed_form(x, y_hat, 1e-8);
  ResponseMap resp = respond(bank, x, uniform_weights(1));
  REQUIRE(resp.peak_row == 0);
  REQUIRE(resp.peak_col == 0);
  REQUIRE_THAT(resp.peak_value, Catch::Matchers::WithinAbs(1.0, 1e-4));
}

TEST_CASE("filter norm decreases monotonically in lambda") {
  std::mt19937 rng(42);
  FeatureStack x = stack_of({testing::random_real(12, 12, rng)});
  ComplexArray y_hat = make_desired_output(12, 12, 1.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double lambda : {0.01, 1.0, 100.0, 1e4, 1e6}) {
    FilterBank bank = train_closed_form(x, y_hat, lambda);
    const double norm = l2_norm(bank.h_hat[0]);
    REQUIRE(norm < prev);
    prev = norm;
  }
  REQUIRE(prev < 1e-3);
}

TEST_CASE("closed form equals the dense circulant ridge solution") {
  std::mt19937 rng(43);
  RealArray x = testing::random_real(8, 8, rng);
  ComplexArray y_hat = make_desired_output(8, 8, 1.0);
  RealArray y = ifft2_real(y_hat);

  FilterBank bank = train_closed_form(stack_of({x}), y_hat, 0.01);
  RealArray t_oracle = oracle::dense_masked_ridge(x, y, ByteArray(8, 8, 1), 0.01);
  REQUIRE(rel_error(bank.spatial(0), t_oracle) < 1e-6);
}

TEST_CASE("circular shift moves the peak exactly") {
  std::mt19937 rng(44);
  RealArray x = testing::random_real(16, 16, rng);
  ComplexArray y_hat = make_desired_output(16, 16, 1.5);
  FilterBank bank = train_closed_form(stack_of({x}), y_hat, 0.01);

  const int dr = 3, dc = 5;
  RealArray shifted(16, 16);
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) shifted((r + dr) % 16, (c + dc) % 16) = x(r, c);

  ResponseMap base = respond(bank, stack_of({x}), uniform_weights(1));
  ResponseMap moved = respond(bank, stack_of({shifted}), uniform_weights(1));
  REQUIRE(moved.peak_row == (base.peak_row + dr) % 16);
  REQUIRE(moved.peak_col == (base.peak_col + dc) % 16);
  REQUIRE_THAT(moved.peak_value, Catch::Matchers::WithinAbs(base.peak_value, 1e-9));
}

TEST_CASE("uniform weights over identical channels equal a single channel") {
  std::mt19937 rng(45);
  RealArray x = testing::random_real(12, 12, rng);
  ComplexArray y_hat = make_desired_output(12, 12, 1.0);

  FilterBank single = train_closed_form(stack_of({x}), y_hat, 0.01);
  ResponseMap r1 = respond(single, stack_of({x}), uniform_weights(1));

  FeatureStack multi = stack_of({x, x, x, x});
  FilterBank bank4 = train_closed_form(multi, y_hat, 0.01);
  ResponseMap r4 = respond(bank4, multi, uniform_weights(4));
  for (size_t i = 0; i < r1.values.size(); ++i)
    REQUIRE_THAT(r4.values[i], Catch::Matchers::WithinAbs(r1.values[i], 1e-9));
}

TEST_CASE("respond is linear in the channel weights") {
  std::mt19937 rng(46);
  FeatureStack x = stack_of({testing::random_real(10, 10, rng), testing::random_real(10, 10, rng)});
  ComplexArray y_hat = make_desired_output(10, 10, 1.0);
  FilterBank bank = train_closed_form(x, y_hat, 0.01);

  ResponseMap a = respond(bank, x, {1.0, 0.0});
  ResponseMap b = respond(bank, x, {0.0, 1.0});
  ResponseMap mix = respond(bank, x, {0.3, 0.7});
  for (size_t i = 0; i < mix.values.size(); ++i)
    REQUIRE_THAT(mix.values[i],
                 Catch::Matchers::WithinAbs(0.3 * a.values[i] + 0.7 * b.values[i], 1e-10));
}

TEST_CASE("model averaging endpoints and geometric convergence") {
  std::mt19937 rng(47);
  FeatureStack xa = stack_of({testing::random_real(8, 8, rng)});
  FeatureStack xb = stack_of({testing::random_real(8, 8, rng)});
  ComplexArray y_hat = make_desired_output(8, 8, 1.0);
  FilterBank a = train_closed_form(xa, y_hat, 0.01);
  FilterBank b = train_closed_form(xb, y_hat, 0.01);

  FilterBank keep_old = update_model(a, b, 0.0);
  FilterBank take_new = update_model(a, b, 1.0);
  for (size_t i = 0; i < a.h_hat[0].size(); ++i) {
    REQUIRE(keep_old.h_hat[0][i] == a.h_hat[0][i]);
    REQUIRE(take_new.h_hat[0][i] == b.h_hat[0][i]);
  }

  // psi = 0.03 repeated: distance to the fixed point scales by 0.97 per step.
  const double psi = 0.03;
  double d0 = 0.0;
  for (size_t i = 0; i < a.h_hat[0].size(); ++i) d0 += std::norm(a.h_hat[0][i] - b.h_hat[0][i]);
  d0 = std::sqrt(d0);
  FilterBank cur = a;
  const int steps = 50;
  for (int s = 0; s < steps; ++s) cur = update_model(cur, b, psi);
  double dn = 0.0;
  for (size_t i = 0; i < cur.h_hat[0].size(); ++i)
    dn += std::norm(cur.h_hat[0][i] - b.h_hat[0][i]);
  dn = std::sqrt(dn);
  REQUIRE_THAT(dn, Catch::Matchers::WithinAbs(d0 * std::pow(1.0 - psi, steps), 1e-12));
}

TEST_CASE("closed form satisfies first-order optimality") {
  std::mt19937 rng(48);
  RealArray x = testing::random_real(8, 8, rng);
  ComplexArray y_hat = make_desired_output(8, 8, 1.0);
  const double lambda = 0.05;
  FilterBank bank = train_closed_form(stack_of({x}), y_hat, lambda);
  ComplexArray x_hat = fft2(x);

  auto objective = [&](const ComplexArray& h) {
    // Per-bin ridge objective: |y - h x|^2 + lambda |h|^2 over bins.
    double obj = 0.0;
    for (size_t i = 0; i < h.size(); ++i)
      obj += std::norm(y_hat[i] - h[i] * x_hat[i]) + lambda * std::norm(h[i]);
    return obj;
  };

  const double base = objective(bank.h_hat[0]);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexArray perturbed = bank.h_hat[0];
    for (auto& v : perturbed) v += 1e-6 * Complex(g(rng), g(rng));
    REQUIRE(objective(perturbed) >= base - 1e-12);
  }
}

TEST_CASE("respond validates shapes and weights") {
  std::mt19937 rng(49);
  FeatureStack x = stack_of({testing::random_real(8, 8, rng)});
  ComplexArray y_hat = make_desired_output(8, 8, 1.0);
  FilterBank bank = train_closed_form(x, y_hat, 0.01);
  FeatureStack wrong = stack_of({testing::random_real(10, 8, rng)});
  REQUIRE_THROWS_AS(respond(bank, wrong, uniform_weights(1)), InvalidGeometryError);
}
