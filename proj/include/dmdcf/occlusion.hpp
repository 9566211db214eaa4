#pragma once

#include <cmath>
#include <deque>
#include <optional>

#include "dmdcf/dcf.hpp"
#include "dmdcf/depth_mask.hpp"
#include "dmdcf/errors.hpp"
#include "dmdcf/features/features.hpp"
#include "dmdcf/frame.hpp"

namespace dmdcf {

struct OcclusionConfig {
  double response_drop = 0.65;     // trigger when r_max falls below this fraction of the running mean
  double depth_support_min = 0.10; // trigger when mask support inside the box falls below this
  double tau = 0.65;               // re-detection acceptance factor against the K-buffer mean
  size_t history_length = 100;     // K
};

struct OcclusionState {
  bool occluded = false;
  int frames_occluded = 0;
};

// Peak-response history: incremental running mean over all accepted samples
// plus a ring buffer of the K most recent ones. The drop test uses the
// running mean, re-detection acceptance uses the buffer mean.
class ResponseHistory {
 public:
  explicit ResponseHistory(size_t capacity = 100) : capacity_(capacity ? capacity : 1) {}

  void record(double r_max) {
    if (!std::isfinite(r_max) || r_max < 0.0)
      throw NumericalError("ResponseHistory::record: non-finite or negative response");
    ++count_;
    running_mean_ += (r_max - running_mean_) / static_cast<double>(count_);
    buffer_.push_back(r_max);
    if (buffer_.size() > capacity_) buffer_.pop_front();
  }

  size_t count() const { return count_; }
  double running_mean() const { return running_mean_; }
  const std::deque<double>& buffer() const { return buffer_; }

  double buffer_mean() const {
    if (buffer_.empty()) return 0.0;
    double s = 0.0;
    for (double v : buffer_) s += v;
    return s / static_cast<double>(buffer_.size());
  }

 private:
  size_t capacity_;
  std::deque<double> buffer_;
  double running_mean_ = 0.0;
  size_t count_ = 0;
};

// Combined detector: occlusion is declared only when BOTH the response has
// dropped and the depth support has collapsed. nullopt = no history yet
// (cannot be declared on the first frame).
inline std::optional<bool> detect_occlusion(double r_max, const ResponseHistory& history,
                                            const Mask& mask, const OcclusionConfig& cfg) {
  if (history.count() == 0) return std::nullopt;
  const bool response_low = r_max < cfg.response_drop * history.running_mean();
  const bool support_low = mask.support_fraction < cfg.depth_support_min;
  return response_low && support_low;
}

struct Redetection {
  Point position;
  double r_max = 0.0;
};

// Full-frame detection with the frozen filter: slide the search window over
// a half-window stride grid, take the globally best response peak, then
// refine once with a window centered on it. Accepted only when the peak
// beats tau * mean of the response buffer.
inline std::optional<Redetection> redetect(const Frame& frame, const FilterBank& filter,
                                           const ResponseHistory& history,
                                           const OcclusionConfig& cfg,
                                           const FeatureConfig& feat_cfg, SizeD target_size,
                                           double padding, int template_w, int template_h,
                                           const std::vector<double>& weights) {
  const double win_w = padding * target_size.w;
  const double win_h = padding * target_size.h;
  if (win_w > frame.width || win_h > frame.height)
    throw InvalidGeometryError("redetect: frame smaller than the search window");

  const int cells_x = template_w / feat_cfg.cell_size;
  const int cells_y = template_h / feat_cfg.cell_size;
  const double px_per_cell_x = win_w / cells_x;
  const double px_per_cell_y = win_h / cells_y;

  auto evaluate = [&](Point center) -> Redetection {
    Patch patch = extract_patch(frame, center, target_size, padding, template_w, template_h);
    FeatureStack feats = compose(patch, feat_cfg);
    ResponseMap resp = respond(filter, feats, weights);
    Redetection cand;
    cand.position = {center.x + resp.disp_col() * px_per_cell_x,
                     center.y + resp.disp_row() * px_per_cell_y};
    cand.r_max = resp.peak_value;
    return cand;
  };

  auto grid_centers = [](double win, int extent) {
    std::vector<double> centers;
    const double lo = win / 2.0, hi = extent - win / 2.0;
    for (double v = lo; v < hi; v += win / 2.0) centers.push_back(v);
    centers.push_back(hi);
    return centers;
  };

  Redetection best;
  bool have_best = false;
  for (double cy : grid_centers(win_h, frame.height)) {
    for (double cx : grid_centers(win_w, frame.width)) {
      Redetection cand = evaluate({cx, cy});
      if (!have_best || cand.r_max > best.r_max) {
        best = cand;
        have_best = true;
      }
    }
  }

  // Refinement pass centered on the best coarse candidate.
  Redetection refined = evaluate(best.position);
  if (refined.r_max > best.r_max) best = refined;

  if (best.r_max > cfg.tau * history.buffer_mean()) return best;
  return std::nullopt;
}

}  // namespace dmdcf
