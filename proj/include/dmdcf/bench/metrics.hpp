#pragma once

#include <optional>
#include <vector>

#include "dmdcf/bench/results.hpp"
#include "dmdcf/errors.hpp"
#include "dmdcf/geometry.hpp"

namespace dmdcf {

struct Metrics {
  std::vector<double> per_frame_iou;
  double mean_iou = 0.0;
  double success = 0.0;  // fraction of frames with IOU > 0.5
};

// Princeton scoring: absent-vs-absent counts as a correct frame (IOU 1),
// absent-vs-present as a miss (IOU 0).
inline Metrics evaluate(const TrackResult& result,
                        const std::vector<std::optional<BoundingBox>>& truth) {
  if (result.frames.size() != truth.size())
    throw EvaluationError("evaluate: result has " + std::to_string(result.frames.size()) +
                          " frames, truth has " + std::to_string(truth.size()));
  Metrics m;
  m.per_frame_iou.reserve(truth.size());
  size_t hits = 0;
  double total = 0.0;
  for (size_t i = 0; i < truth.size(); ++i) {
    const bool pred_absent = result.frames[i].absent;
    const bool true_absent = !truth[i].has_value();
    double v = 0.0;
    if (pred_absent && true_absent)
      v = 1.0;
    else if (!pred_absent && !true_absent)
      v = iou(result.frames[i].box(), *truth[i]);
    m.per_frame_iou.push_back(v);
    total += v;
    if (v > 0.5) ++hits;
  }
  if (!truth.empty()) {
    m.mean_iou = total / static_cast<double>(truth.size());
    m.success = static_cast<double>(hits) / static_cast<double>(truth.size());
  }
  return m;
}

}  // namespace dmdcf
