#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "dmdcf/bench/results.hpp"
#include "dmdcf/bench/sequence.hpp"
#include "dmdcf/io/png_io.hpp"
#include "dmdcf/tracker.hpp"

namespace dmdcf {

struct RunOptions {
  std::string debug_mask_dir;  // when set, dumps the per-frame pixel mask
};

// Drives a tracker over a frame source. Timing covers only init/track calls,
// never decoding or disk writes.
inline TrackResult run_frames(const Tracker& tracker, const BoundingBox& init_box,
                              size_t frame_count,
                              const std::function<Frame(size_t)>& frame_at,
                              const RunOptions& options = {}) {
  using clock = std::chrono::steady_clock;
  TrackResult result;
  result.frames.reserve(frame_count);
  TrackerState state;

  auto dump_mask = [&](size_t i) {
    if (options.debug_mask_dir.empty()) return;
    const ByteArray& m = state.mask.pixel_values;
    if (m.empty()) return;
    std::vector<uint8_t> px(m.size() * 3);
    for (size_t k = 0; k < m.size(); ++k)
      px[3 * k] = px[3 * k + 1] = px[3 * k + 2] = m[k] ? 255 : 0;
    char name[32];
    std::snprintf(name, sizeof(name), "mask-%05zu.png", i);
    save_rgb8((std::filesystem::path(options.debug_mask_dir) / name).string(), m.cols(),
              m.rows(), px);
  };

  for (size_t i = 0; i < frame_count; ++i) {
    Frame frame = frame_at(i);
    const auto t0 = clock::now();
    if (i == 0) {
      state = tracker.init(frame, init_box);
      const double ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
      result.frames.push_back(FrameResult::from_box(state.box(), false, ms));
    } else {
      TrackOutcome out = tracker.track(state, frame);
      const double ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
      result.frames.push_back(FrameResult::from_box(out.box, out.occluded, ms));
    }
    dump_mask(i);
  }
  return result;
}

inline TrackResult run_sequence(const Tracker& tracker, const Sequence& seq,
                                const RunOptions& options = {}) {
  return run_frames(
      tracker, seq.init_box, seq.frames.size(),
      [&](size_t i) { return load_frame(seq, i); }, options);
}

inline double mean_fps(const TrackResult& result) {
  double total_ms = 0.0;
  for (const auto& f : result.frames) total_ms += f.ms;
  if (total_ms <= 0.0) return 0.0;
  return static_cast<double>(result.frames.size()) / (total_ms / 1000.0);
}

}  // namespace dmdcf
