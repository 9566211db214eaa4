#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "dmdcf/core/array.hpp"
#include "dmdcf/errors.hpp"
#include "dmdcf/frame.hpp"

namespace dmdcf {

struct RectI {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
};

// Single-Gaussian foreground/background depth distributions (millimeters).
struct DepthModel {
  double mu_fg = 0.0;
  double sigma_fg = 1.0;
  double mu_bg = 0.0;
  double sigma_bg = 1.0;
  double theta = 0.95;      // mean update rate
  double gamma = 0.20;      // std update rate
  double sigma_min = 20.0;  // floor, keeps densities finite on planar targets
};

// Binary spatial mask. values lives at feature-cell resolution (what the
// filter solver consumes); pixel_values at patch resolution (what the depth
// statistics consume).
struct Mask {
  ByteArray values;
  ByteArray pixel_values;
  double support_fraction = 1.0;

  static Mask all_ones(int cell_rows, int cell_cols, int px_rows, int px_cols) {
    Mask m;
    m.values = ByteArray(cell_rows, cell_cols, 1);
    m.pixel_values = ByteArray(px_rows, px_cols, 1);
    m.support_fraction = 1.0;
    return m;
  }

  size_t active_cells() const {
    size_t n = 0;
    for (uint8_t v : values) n += v;
    return n;
  }
};

struct MaskConfig {
  int cell_size = 4;
  bool use_otsu = true;  // fall back to the fixed ratio threshold when false
  double omega = 1.0;    // fixed P_fg/P_bg threshold (used when use_otsu = false)
};

namespace detail {

struct SampleStats {
  double mean = 0.0;
  double stddev = 0.0;
  size_t count = 0;
};

template <typename Pred>
SampleStats depth_stats(const Patch& patch, Pred&& keep) {
  double s = 0.0, s2 = 0.0;
  size_t n = 0;
  for (int r = 0; r < patch.height; ++r)
    for (int c = 0; c < patch.width; ++c) {
      const uint16_t d = patch.d(r, c);
      if (d == 0 || !keep(r, c)) continue;
      s += d;
      s2 += static_cast<double>(d) * d;
      ++n;
    }
  SampleStats out;
  out.count = n;
  if (n) {
    out.mean = s / n;
    const double var = std::max(0.0, s2 / n - out.mean * out.mean);
    out.stddev = std::sqrt(var);
  }
  return out;
}

inline bool in_rect(const RectI& r, int row, int col) {
  return col >= r.x && col < r.x + r.w && row >= r.y && row < r.y + r.h;
}

// log N(d; mu, sigma) without the shared -log(sqrt(2 pi)) term, which
// cancels in the ratio.
inline double log_density(double d, double mu, double sigma) {
  const double z = (d - mu) / sigma;
  return -std::log(sigma) - 0.5 * z * z;
}

}  // namespace detail

// Initial distributions from the ground-truth box: foreground from valid
// depths inside the box, background from valid depths in the rest of the
// padded patch.
inline DepthModel init_model(const Patch& patch, const RectI& box_px, double theta,
                             double gamma, double sigma_min = 20.0) {
  auto fg = detail::depth_stats(patch, [&](int r, int c) { return detail::in_rect(box_px, r, c); });
  if (fg.count == 0)
    throw InitializationError("init_model: no valid depth inside the initial box");
  auto bg = detail::depth_stats(patch, [&](int r, int c) { return !detail::in_rect(box_px, r, c); });

  DepthModel m;
  m.theta = theta;
  m.gamma = gamma;
  m.sigma_min = sigma_min;
  m.mu_fg = fg.mean;
  m.sigma_fg = std::max(fg.stddev, sigma_min);
  if (bg.count) {
    m.mu_bg = bg.mean;
    m.sigma_bg = std::max(bg.stddev, sigma_min);
  } else {
    // No background sample (unpadded box): a flat, wide background keeps the
    // ratio image foreground-dominant near mu_fg.
    m.mu_bg = fg.mean;
    m.sigma_bg = 1e6;
  }
  return m;
}

// Per-pixel log(P_fg / P_bg); missing depth reads as neutral 0.
inline RealArray probability_ratio_image(const Patch& patch, const DepthModel& model) {
  RealArray out(patch.height, patch.width, 0.0);
  for (int r = 0; r < patch.height; ++r)
    for (int c = 0; c < patch.width; ++c) {
      const uint16_t d = patch.d(r, c);
      if (d == 0) continue;
      out(r, c) = detail::log_density(d, model.mu_fg, model.sigma_fg) -
                  detail::log_density(d, model.mu_bg, model.sigma_bg);
    }
  return out;
}

// Otsu threshold over a 256-bin histogram of the value range. Returns the
// upper edge of the argmax split bin; nullopt when the input is (near)
// constant and no split exists.
//
// Between-class variance for split k is computed as
//   sigma_b(k) = (n0/N)*(n1/N)*(mu0 - mu1)^2
// with counts and bin-index sums accumulated as integers, so an exhaustive
// recomputation reproduces the argmax exactly.
inline std::optional<double> otsu_threshold(const RealArray& image) {
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (double v : image) {
    if (first) {
      lo = hi = v;
      first = false;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (first || hi - lo < 1e-6) return std::nullopt;

  constexpr int kBins = 256;
  const double range = hi - lo;
  double count[kBins] = {0};
  for (double v : image) {
    int b = static_cast<int>((v - lo) / range * kBins);
    if (b >= kBins) b = kBins - 1;
    if (b < 0) b = 0;
    count[b] += 1.0;
  }
  double total = 0.0, total_sum = 0.0;
  for (int b = 0; b < kBins; ++b) {
    total += count[b];
    total_sum += count[b] * b;
  }

  int best_k = -1;
  double best_var = -1.0;
  double n0 = 0.0, s0 = 0.0;
  for (int k = 0; k < kBins - 1; ++k) {
    n0 += count[k];
    s0 += count[k] * k;
    const double n1 = total - n0;
    if (n0 == 0.0 || n1 == 0.0) continue;
    const double mu0 = s0 / n0;
    const double mu1 = (total_sum - s0) / n1;
    const double var = (n0 / total) * (n1 / total) * (mu0 - mu1) * (mu0 - mu1);
    if (var > best_var) {
      best_var = var;
      best_k = k;
    }
  }
  if (best_k < 0) return std::nullopt;
  return lo + (best_k + 1) * range / kBins;
}

// Ratio image -> thresholded pixel mask -> majority-voted cell mask.
// support_fraction counts active cells inside the unpadded box region.
inline Mask build_mask(const Patch& patch, const DepthModel& model, const RectI& box_px,
                       const MaskConfig& cfg) {
  const RealArray ratio = probability_ratio_image(patch, model);
  double threshold = 0.0;
  if (cfg.use_otsu) {
    threshold = otsu_threshold(ratio).value_or(0.0);  // sign test fallback
  } else {
    threshold = std::log(cfg.omega);
  }

  Mask mask;
  mask.pixel_values = ByteArray(patch.height, patch.width, 0);
  for (size_t i = 0; i < ratio.size(); ++i)
    mask.pixel_values[i] = ratio[i] > threshold ? 1 : 0;

  const int cell = cfg.cell_size;
  const int cell_rows = patch.height / cell;
  const int cell_cols = patch.width / cell;
  mask.values = ByteArray(cell_rows, cell_cols, 0);
  for (int i = 0; i < cell_rows; ++i)
    for (int j = 0; j < cell_cols; ++j) {
      int ones = 0;
      for (int r = i * cell; r < (i + 1) * cell; ++r)
        for (int c = j * cell; c < (j + 1) * cell; ++c) ones += mask.pixel_values(r, c);
      mask.values(i, j) = 2 * ones >= cell * cell ? 1 : 0;
    }

  // Box region on the cell grid.
  int c0 = static_cast<int>(std::lround(static_cast<double>(box_px.x) / cell));
  int r0 = static_cast<int>(std::lround(static_cast<double>(box_px.y) / cell));
  int c1 = static_cast<int>(std::lround(static_cast<double>(box_px.x + box_px.w) / cell));
  int r1 = static_cast<int>(std::lround(static_cast<double>(box_px.y + box_px.h) / cell));
  c0 = std::max(0, std::min(c0, cell_cols - 1));
  r0 = std::max(0, std::min(r0, cell_rows - 1));
  c1 = std::max(c0 + 1, std::min(c1, cell_cols));
  r1 = std::max(r0 + 1, std::min(r1, cell_rows));

  size_t ones = 0;
  for (int i = r0; i < r1; ++i)
    for (int j = c0; j < c1; ++j) ones += mask.values(i, j);
  mask.support_fraction =
      static_cast<double>(ones) / (static_cast<double>(r1 - r0) * (c1 - c0));
  return mask;
}

// Blend current-frame sample statistics into the model:
//   mu^t = mu_sample * theta + mu^{t-1} * (1 - theta)
//   sigma^t = sigma_sample * gamma + sigma^{t-1} * (1 - gamma)
// Skipped entirely when the masked-in sample is empty.
inline DepthModel update_model(const DepthModel& model, const Patch& patch, const Mask& mask) {
  auto fg = detail::depth_stats(
      patch, [&](int r, int c) { return mask.pixel_values(r, c) != 0; });
  if (fg.count == 0) return model;
  auto bg = detail::depth_stats(
      patch, [&](int r, int c) { return mask.pixel_values(r, c) == 0; });

  DepthModel out = model;
  out.mu_fg = fg.mean * model.theta + model.mu_fg * (1.0 - model.theta);
  out.sigma_fg = std::max(fg.stddev * model.gamma + model.sigma_fg * (1.0 - model.gamma),
                          model.sigma_min);
  if (bg.count) {
    out.mu_bg = bg.mean * model.theta + model.mu_bg * (1.0 - model.theta);
    out.sigma_bg = std::max(bg.stddev * model.gamma + model.sigma_bg * (1.0 - model.gamma),
                            model.sigma_min);
  }
  return out;
}

}  // namespace dmdcf
