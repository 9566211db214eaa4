#pragma once

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "dmdcf/core/array.hpp"

namespace dmdcf {

// 2D complex FFT on Array2D<Complex>, backed by FFTW.
//
// Conventions used throughout the library:
//   fft2:  X(k) = sum_n x(n) exp(-2*pi*i*<k,n>/N)   (unnormalized)
//   ifft2: x(n) = (1/N) sum_k X(k) exp(+2*pi*i*<k,n>/N)
// so ifft2(fft2(x)) == x and Parseval reads ||X||^2 = N * ||x||^2.
class Fft2 {
 public:
  static void forward_inplace(ComplexArray& a) { execute(a, FFTW_FORWARD); }

  static void inverse_inplace(ComplexArray& a) {
    execute(a, FFTW_BACKWARD);
    const double inv_n = 1.0 / static_cast<double>(a.size());
    for (Complex& v : a) v *= inv_n;
  }

 private:
  static void execute(ComplexArray& a, int sign) {
    if (a.empty()) return;
    fftw_plan plan = plan_for(a.rows(), a.cols(), sign);
    auto* buf = reinterpret_cast<fftw_complex*>(a.data());
    fftw_execute_dft(plan, buf, buf);
  }

  // Plans are created once per (rows, cols, direction) and kept for the
  // process lifetime. FFTW planning is not thread-safe; execution is.
  static fftw_plan plan_for(int rows, int cols, int sign) {
    static std::mutex mutex;
    static std::map<std::tuple<int, int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(mutex);
    const auto key = std::make_tuple(rows, cols, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<Complex> scratch(static_cast<size_t>(rows) * cols);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_2d(rows, cols, buf, buf, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, plan);
    return plan;
  }
};

inline ComplexArray fft2(const RealArray& x) {
  ComplexArray out(x.rows(), x.cols());
  for (size_t i = 0; i < x.size(); ++i) out[i] = Complex(x[i], 0.0);
  Fft2::forward_inplace(out);
  return out;
}

inline ComplexArray fft2(ComplexArray x) {
  Fft2::forward_inplace(x);
  return x;
}

inline ComplexArray ifft2(ComplexArray x) {
  Fft2::inverse_inplace(x);
  return x;
}

inline RealArray ifft2_real(const ComplexArray& x) {
  ComplexArray tmp = x;
  Fft2::inverse_inplace(tmp);
  RealArray out(x.rows(), x.cols());
  for (size_t i = 0; i < tmp.size(); ++i) out[i] = tmp[i].real();
  return out;
}

}  // namespace dmdcf
