#pragma once

#include <cmath>
#include <optional>
#include <ostream>
#include <vector>

#include "dmdcf/core/array.hpp"
#include "dmdcf/core/fft.hpp"
#include "dmdcf/dcf.hpp"
#include "dmdcf/depth_mask.hpp"
#include "dmdcf/errors.hpp"

namespace dmdcf {

// Penalty schedule mu_it = mu0 * beta^it, expressed relative to the channel's
// mean per-bin spectral energy (|x_hat|^2 / N averaged over bins). The
// normalization keeps one set of constants usable across feature types and
// input scales. A fixed penalty near 0.6 beats geometric growth here: growth
// freezes the iteration before the data term is satisfied.
struct AdmmConfig {
  double mu0 = 0.6;
  double beta = 1.0;
  int iterations = 4;
  std::ostream* debug = nullptr;  // per-iteration "channel,iter,objective,residual"
};

// Iterate state of one masked solve. h is the spatial filter, exactly zero
// outside the mask; g_hat the Fourier auxiliary variable; xi_hat the
// Lagrange multiplier.
struct AdmmState {
  std::vector<ComplexArray> g_hat;
  std::vector<RealArray> h;
  std::vector<ComplexArray> xi_hat;
  double mu = 0.0;
};

// ||g - F(M h)|| / ||g|| aggregated over channels; 0/0 reads as 0.
inline double constraint_residual(const AdmmState& state) {
  double num = 0.0, den = 0.0;
  for (size_t c = 0; c < state.g_hat.size(); ++c) {
    ComplexArray s_hat = fft2(state.h[c]);
    for (size_t i = 0; i < s_hat.size(); ++i) {
      num += std::norm(state.g_hat[c][i] - s_hat[i]);
      den += std::norm(state.g_hat[c][i]);
    }
  }
  if (den == 0.0) return 0.0;
  return std::sqrt(num / den);
}

// Data + regularization objective of the masked ridge problem evaluated at
// the constraint-feasible point h (per channel, summed):
//   (1/2N) ||y_hat - x_hat .* conj(F h)||^2 + (lambda/2) ||h||^2
inline double masked_objective(const std::vector<ComplexArray>& x_hat,
                               const ComplexArray& y_hat, double lambda,
                               const std::vector<RealArray>& h) {
  const double n = static_cast<double>(y_hat.size());
  double total = 0.0;
  for (size_t c = 0; c < x_hat.size(); ++c) {
    ComplexArray s_hat = fft2(h[c]);
    double data = 0.0;
    for (size_t i = 0; i < s_hat.size(); ++i)
      data += std::norm(y_hat[i] - x_hat[c][i] * std::conj(s_hat[i]));
    double reg = 0.0;
    for (double v : h[c]) reg += v * v;
    total += data / (2.0 * n) + 0.5 * lambda * reg;
  }
  return total;
}

// ADMM solve of the mask-constrained correlation filter, per channel:
//
//   minimize (1/2N) ||y_hat - x_hat .* conj(g)||^2 + (lambda/2) ||h||^2
//   subject to g = F(M .* h)
//
// with the augmented Lagrangian (real inner product multiplier term) and
// alternating closed-form updates; the penalty grows geometrically. The
// returned bank stores conj(F(M .* h)) per channel, i.e. the same storage
// convention train_closed_form uses, so an all-ones mask reproduces the
// unmasked closed form.
inline FilterBank solve_masked(const FeatureStack& x, const ComplexArray& y_hat,
                               double lambda, const Mask& mask, const AdmmConfig& config,
                               const FilterBank* warm_start = nullptr,
                               AdmmState* out_state = nullptr) {
  if (config.mu0 <= 0.0 || config.beta < 1.0 || config.iterations < 1)
    throw ConfigError("solve_masked: invalid ADMM configuration");
  if (lambda < 0.0) throw ConfigError("solve_masked: lambda must be nonnegative");
  if (x.channels.empty()) throw InvalidGeometryError("solve_masked: no channels");
  const int rows = x.rows(), cols = x.cols();
  if (rows != y_hat.rows() || cols != y_hat.cols() || rows != mask.values.rows() ||
      cols != mask.values.cols())
    throw InvalidGeometryError("solve_masked: shape mismatch");
  if (mask.active_cells() == 0) throw InvalidMaskError("solve_masked: empty mask");

  const size_t channels = x.channels.size();
  const double n = static_cast<double>(y_hat.size());
  const ByteArray& m = mask.values;

  std::vector<ComplexArray> x_hat = fft_channels(x);

  FilterBank bank;
  bank.y_hat = y_hat;
  bank.lambda = lambda;
  bank.h_hat.resize(channels);

  AdmmState state;
  state.g_hat.resize(channels);
  state.h.resize(channels);
  state.xi_hat.resize(channels);

  ComplexArray p(rows, cols), work(rows, cols);
  RealArray s(rows, cols);

  for (size_t c = 0; c < channels; ++c) {
    const ComplexArray& xh = x_hat[c];

    // Per-frequency data terms: P = x_hat .* conj(y_hat) / N, S = |x_hat|^2 / N.
    double energy = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
      p[i] = xh[i] * std::conj(y_hat[i]) / n;
      s[i] = std::norm(xh[i]) / n;
      energy += s[i];
    }
    const double mu_unit = std::max(energy / n, 1e-300);

    // Spatial iterate, masked. Warm start from the previous filter when
    // given, otherwise from the masked unconstrained closed form.
    RealArray t(rows, cols);
    if (warm_start && warm_start->h_hat.size() == channels &&
        warm_start->h_hat[c].same_shape(y_hat)) {
      for (size_t i = 0; i < work.size(); ++i) work[i] = std::conj(warm_start->h_hat[c][i]);
    } else {
      for (size_t i = 0; i < work.size(); ++i)
        work[i] = xh[i] * std::conj(y_hat[i]) / (std::norm(xh[i]) + bank.lambda);
    }
    {
      RealArray t0 = ifft2_real(work);
      for (size_t i = 0; i < t.size(); ++i) t[i] = m[i] ? t0[i] : 0.0;
    }

    ComplexArray xi(rows, cols);
    ComplexArray g(rows, cols);
    ComplexArray s_hat = fft2(t);
    double mu = config.mu0 * mu_unit;

    for (int iter = 0; iter < config.iterations; ++iter) {
      for (size_t i = 0; i < g.size(); ++i)
        g[i] = (p[i] + mu * s_hat[i] - xi[i]) / (s[i] + mu);

      for (size_t i = 0; i < work.size(); ++i) work[i] = mu * g[i] + xi[i];
      RealArray ht = ifft2_real(work);
      const double scale = 1.0 / (bank.lambda / n + mu);
      for (size_t i = 0; i < t.size(); ++i) t[i] = m[i] ? ht[i] * scale : 0.0;

      s_hat = fft2(t);
      for (size_t i = 0; i < xi.size(); ++i) xi[i] += mu * (g[i] - s_hat[i]);

      if (!std::isfinite(l2_norm(t)) || !std::isfinite(l2_norm(g)))
        throw NumericalError("solve_masked: non-finite iterate at iteration " +
                             std::to_string(iter));
      if (config.debug) {
        std::vector<ComplexArray> one_x{xh};
        std::vector<RealArray> one_h{t};
        AdmmState snap;
        snap.g_hat = {g};
        snap.h = {t};
        snap.xi_hat = {xi};
        snap.mu = mu;
        *config.debug << c << ',' << iter << ','
                      << masked_objective(one_x, y_hat, bank.lambda, one_h) << ','
                      << constraint_residual(snap) << '\n';
      }
      mu *= config.beta;
    }

    ComplexArray h_out(rows, cols);
    for (size_t i = 0; i < h_out.size(); ++i) h_out[i] = std::conj(s_hat[i]);
    bank.h_hat[c] = std::move(h_out);

    state.g_hat[c] = std::move(g);
    state.h[c] = std::move(t);
    state.xi_hat[c] = std::move(xi);
    state.mu = mu;
  }

  if (out_state) *out_state = std::move(state);
  return bank;
}

}  // namespace dmdcf
