#pragma once

#include <cmath>
#include <vector>

#include "dmdcf/core/array.hpp"
#include "dmdcf/core/fft.hpp"
#include "dmdcf/errors.hpp"
#include "dmdcf/features/features.hpp"

namespace dmdcf {

// Per-channel correlation filters in Fourier form plus the desired output.
//
// Storage convention: h_hat[c] is the closed-form solution
//     h_hat = conj(x_hat) .* y_hat ./ (conj(x_hat) .* x_hat + lambda)
// and the response of a sample z is ifft2(sum_c w_c * h_hat[c] .* z_hat[c]).
// The plain product (no conjugation) pairs with this storage: training on x
// and responding on the same x reproduces the desired output.
struct FilterBank {
  std::vector<ComplexArray> h_hat;
  ComplexArray y_hat;
  double lambda = 0.01;
  double psi = 0.03;

  int rows() const { return y_hat.rows(); }
  int cols() const { return y_hat.cols(); }
  size_t channel_count() const { return h_hat.size(); }

  // Spatial-domain view of one channel's filter (the correlation template,
  // oriented like the patch). Exactly zero outside the mask for masked
  // training.
  RealArray spatial(size_t c) const {
    ComplexArray conj_h(y_hat.rows(), y_hat.cols());
    const ComplexArray& h = h_hat[c];
    for (size_t i = 0; i < h.size(); ++i) conj_h[i] = std::conj(h[i]);
    return ifft2_real(conj_h);
  }
};

struct ResponseMap {
  RealArray values;
  int peak_row = 0;
  int peak_col = 0;
  double peak_value = 0.0;
  // Sub-cell refinement from 1D quadratic fits around the integer peak.
  double refined_row = 0.0;
  double refined_col = 0.0;

  // Peak displacement relative to position (0,0), wrapped to the signed
  // half-open range [-n/2, n/2).
  double disp_row() const { return wrap(refined_row, values.rows()); }
  double disp_col() const { return wrap(refined_col, values.cols()); }

  static double wrap(double v, int n) { return v >= n / 2.0 ? v - n : v; }
};

// Fourier transform of a periodic 2D Gaussian with peak value 1 at (0,0).
inline ComplexArray make_desired_output(int rows, int cols, double sigma) {
  if (sigma <= 0.0) throw ConfigError("make_desired_output: sigma must be positive");
  if (rows <= 0 || cols <= 0) throw ConfigError("make_desired_output: empty shape");
  RealArray y(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const double dr = r <= rows / 2 ? r : r - rows;
    for (int c = 0; c < cols; ++c) {
      const double dc = c <= cols / 2 ? c : c - cols;
      y(r, c) = std::exp(-0.5 * (dr * dr + dc * dc) / (sigma * sigma));
    }
  }
  return fft2(y);
}

inline std::vector<ComplexArray> fft_channels(const FeatureStack& x) {
  std::vector<ComplexArray> out;
  out.reserve(x.channels.size());
  for (const auto& c : x.channels) out.push_back(fft2(c));
  return out;
}

inline FilterBank train_closed_form(const FeatureStack& x, const ComplexArray& y_hat,
                                    double lambda) {
  if (x.channels.empty()) throw InvalidGeometryError("train_closed_form: no channels");
  if (x.rows() != y_hat.rows() || x.cols() != y_hat.cols())
    throw InvalidGeometryError("train_closed_form: shape mismatch");

  FilterBank bank;
  bank.y_hat = y_hat;
  bank.lambda = lambda;
  bank.h_hat.reserve(x.channels.size());
  for (const auto& chan : x.channels) {
    ComplexArray x_hat = fft2(chan);
    ComplexArray h(x_hat.rows(), x_hat.cols());
    for (size_t i = 0; i < x_hat.size(); ++i) {
      const Complex xc = std::conj(x_hat[i]);
      const double denom = std::norm(x_hat[i]) + lambda;
      if (denom == 0.0)
        throw NumericalError("train_closed_form: zero spectrum bin with lambda = 0");
      h[i] = xc * y_hat[i] / denom;
    }
    bank.h_hat.push_back(std::move(h));
  }
  return bank;
}

namespace detail {

// 1D quadratic peak interpolation over wrapped neighbors; offset in [-0.5, 0.5].
inline double quadratic_offset(double lo, double mid, double hi) {
  const double denom = lo - 2.0 * mid + hi;
  if (denom >= 0.0) return 0.0;  // not a strict local max
  double off = 0.5 * (lo - hi) / denom;
  return std::min(0.5, std::max(-0.5, off));
}

}  // namespace detail

inline ResponseMap respond(const FilterBank& bank, const FeatureStack& x,
                           const std::vector<double>& channel_weights) {
  if (bank.channel_count() != x.channels.size() ||
      bank.channel_count() != channel_weights.size())
    throw InvalidGeometryError("respond: channel count mismatch");
  if (x.rows() != bank.rows() || x.cols() != bank.cols())
    throw InvalidGeometryError("respond: shape mismatch");

  ComplexArray acc(bank.rows(), bank.cols());
  ComplexArray x_hat;
  for (size_t c = 0; c < x.channels.size(); ++c) {
    x_hat = fft2(x.channels[c]);
    const ComplexArray& h = bank.h_hat[c];
    const double w = channel_weights[c];
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += w * h[i] * x_hat[i];
  }

  ResponseMap map;
  map.values = ifft2_real(acc);
  const RealArray& v = map.values;
  for (int r = 0; r < v.rows(); ++r)
    for (int c = 0; c < v.cols(); ++c)
      if (v(r, c) > map.peak_value || (r == 0 && c == 0)) {
        map.peak_value = v(r, c);
        map.peak_row = r;
        map.peak_col = c;
      }

  const int pr = map.peak_row, pc = map.peak_col;
  const int rows = v.rows(), cols = v.cols();
  const double up = v((pr + rows - 1) % rows, pc);
  const double down = v((pr + 1) % rows, pc);
  const double left = v(pr, (pc + cols - 1) % cols);
  const double right = v(pr, (pc + 1) % cols);
  map.refined_row = pr + detail::quadratic_offset(up, map.peak_value, down);
  map.refined_col = pc + detail::quadratic_offset(left, map.peak_value, right);
  return map;
}

inline std::vector<double> uniform_weights(size_t n) {
  return std::vector<double>(n, n ? 1.0 / static_cast<double>(n) : 0.0);
}

// Exponential model averaging: h^t = psi * h_new + (1 - psi) * h_old.
inline FilterBank update_model(const FilterBank& old_bank, const FilterBank& new_bank,
                               double psi) {
  if (old_bank.channel_count() != new_bank.channel_count())
    throw InvalidGeometryError("update_model: channel count mismatch");
  FilterBank out = old_bank;
  out.psi = psi;
  for (size_t c = 0; c < out.h_hat.size(); ++c) {
    const ComplexArray& a = old_bank.h_hat[c];
    const ComplexArray& b = new_bank.h_hat[c];
    if (!a.same_shape(b)) throw InvalidGeometryError("update_model: shape mismatch");
    for (size_t i = 0; i < a.size(); ++i)
      out.h_hat[c][i] = psi * b[i] + (1.0 - psi) * a[i];
  }
  return out;
}

}  // namespace dmdcf
