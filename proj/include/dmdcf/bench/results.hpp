#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dmdcf/bench/sequence.hpp"
#include "dmdcf/errors.hpp"
#include "dmdcf/geometry.hpp"

namespace dmdcf {

// Per-frame tracker output in the submission format: integer corners or an
// absent mark, plus the tracking time (disk I/O excluded).
struct FrameResult {
  int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  bool absent = false;
  double ms = 0.0;

  BoundingBox box() const {
    return BoundingBox(x1, y1, x2 - x1, y2 - y1);
  }

  static FrameResult from_box(const BoundingBox& b, bool absent, double ms) {
    FrameResult r;
    r.x1 = static_cast<int>(std::lround(b.x));
    r.y1 = static_cast<int>(std::lround(b.y));
    r.x2 = static_cast<int>(std::lround(b.x2()));
    r.y2 = static_cast<int>(std::lround(b.y2()));
    r.absent = absent;
    r.ms = ms;
    return r;
  }
};

struct TrackResult {
  std::vector<FrameResult> frames;

  bool operator==(const TrackResult& o) const {
    if (frames.size() != o.frames.size()) return false;
    for (size_t i = 0; i < frames.size(); ++i) {
      const auto& a = frames[i];
      const auto& b = o.frames[i];
      if (a.absent != b.absent || a.ms != b.ms) return false;
      if (!a.absent && (a.x1 != b.x1 || a.y1 != b.y1 || a.x2 != b.x2 || a.y2 != b.y2))
        return false;
    }
    return true;
  }
};

inline std::string timing_path(const std::string& result_path) {
  return result_path + ".timing";
}

// One "x1,y1,x2,y2" line per frame, "NaN,NaN,NaN,NaN" for absent frames;
// per-frame milliseconds go to a sidecar file.
inline void write_result(const TrackResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& f : result.frames) {
    if (f.absent)
      out << "NaN,NaN,NaN,NaN\n";
    else
      out << f.x1 << ',' << f.y1 << ',' << f.x2 << ',' << f.y2 << '\n';
  }
  if (!out) throw IoError("write failed: " + path);

  std::ofstream timing(timing_path(path));
  if (!timing) throw IoError("cannot write " + timing_path(path));
  timing << std::setprecision(17);
  for (const auto& f : result.frames) timing << f.ms << '\n';
  if (!timing) throw IoError("write failed: " + timing_path(path));
}

inline TrackResult read_result(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  TrackResult result;
  std::string line;
  size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    line = seq_detail::trim(line);
    if (line.empty()) continue;
    auto box = seq_detail::parse_corner_line(line, path + " line " + std::to_string(ln));
    FrameResult f;
    if (box) {
      f.x1 = static_cast<int>(std::lround(box->x));
      f.y1 = static_cast<int>(std::lround(box->y));
      f.x2 = static_cast<int>(std::lround(box->x2()));
      f.y2 = static_cast<int>(std::lround(box->y2()));
    } else {
      f.absent = true;
    }
    result.frames.push_back(f);
  }

  if (std::ifstream timing(timing_path(path)); timing) {
    size_t i = 0;
    while (std::getline(timing, line) && i < result.frames.size()) {
      line = seq_detail::trim(line);
      if (!line.empty()) result.frames[i].ms = std::stod(line);
      ++i;
    }
  }
  return result;
}

}  // namespace dmdcf
