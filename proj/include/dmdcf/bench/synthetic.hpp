#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "dmdcf/bench/sequence.hpp"
#include "dmdcf/errors.hpp"
#include "dmdcf/frame.hpp"
#include "dmdcf/geometry.hpp"
#include "dmdcf/io/png_io.hpp"

namespace dmdcf {

// Seeded desk-scale RGBD scene: textured target over a textured background,
// optional nearer-depth occluder sweeping across the target on a coverage
// schedule. Rendering is a pure function of (spec, frame, pixel).
struct SyntheticSpec {
  std::string name = "synthetic";
  int canvas_w = 640;
  int canvas_h = 480;
  int frames = 60;
  uint64_t seed = 1;

  double target_w = 90.0;
  double target_h = 70.0;
  double target_x = 160.0;  // top-left at frame 0
  double target_y = 200.0;
  double target_vx = 0.0;  // px per frame
  double target_vy = 0.0;
  double target_zoom = 1.0;  // multiplicative size change per frame
  uint16_t target_depth = 1200;

  uint16_t background_depth = 3000;

  bool occluder_enabled = false;
  uint16_t occluder_depth = 600;
  int occlusion_start = 20;
  int occlusion_ramp = 8;
  int occlusion_hold = 15;
  double occlusion_peak = 1.0;

  double rgb_noise = 2.0;
  double depth_noise = 10.0;  // mm
  double hole_rate = 0.02;    // fraction of depth pixels reading 0

  void validate() const;
};

struct SyntheticTruth {
  BoundingBox box;
  double coverage = 0.0;
  bool occluded_mark = false;  // coverage >= 0.9, mirrors the absent convention
};

namespace synth_detail {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  uint64_t h = splitmix64(seed ^ 0x1234567887654321ull);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

inline double to_unit(uint64_t h) {
  return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);  // [0, 1)
}

// Deterministic standard normal from a hash (Box-Muller).
inline double gauss(uint64_t h) {
  const double u1 = std::max(to_unit(splitmix64(h ^ 0xabcdefull)), 1e-12);
  const double u2 = to_unit(splitmix64(h ^ 0x123456ull));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace synth_detail

inline void SyntheticSpec::validate() const {
  if (canvas_w < 16 || canvas_h < 16) throw ConfigError("synthetic: canvas too small");
  if (frames < 1) throw ConfigError("synthetic: at least one frame required");
  if (target_w <= 0 || target_h <= 0) throw ConfigError("synthetic: target size must be positive");
  if (target_zoom <= 0) throw ConfigError("synthetic: zoom must be positive");
  if (occluder_enabled) {
    if (occluder_depth >= target_depth)
      throw ConfigError("synthetic: occluder must be nearer than the target");
    if (occlusion_ramp < 1 || occlusion_hold < 0 || occlusion_peak <= 0.0 ||
        occlusion_peak > 1.0)
      throw ConfigError("synthetic: invalid occlusion schedule");
  }
}

class SyntheticSequence {
 public:
  explicit SyntheticSequence(SyntheticSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    if (spec_.occluder_enabled) {
      for (int t = 0; t < spec_.frames; ++t) {
        if (coverage_at(t) > 0.0) {
          const BoundingBox b = box_at(t);
          if (b.x < 0 || b.y < 0 || b.x2() > spec_.canvas_w || b.y2() > spec_.canvas_h)
            throw ConfigError("synthetic: target leaves the canvas while occlusion scheduled");
        }
      }
    }
  }

  const SyntheticSpec& spec() const { return spec_; }
  int frame_count() const { return spec_.frames; }

  SyntheticTruth truth(int t) const {
    SyntheticTruth out;
    out.box = box_at(t);
    out.coverage = coverage_at(t);
    out.occluded_mark = out.coverage >= 0.9;
    return out;
  }

  Frame render(int t) const {
    using namespace synth_detail;
    Frame frame(spec_.canvas_w, spec_.canvas_h);
    frame.index = t;

    const BoundingBox target = box_at(t);
    const double scale_x = target.w / spec_.target_w;
    const double scale_y = target.h / spec_.target_h;
    const bool occ = spec_.occluder_enabled;
    const BoundingBox occluder = occ ? occluder_at(t) : BoundingBox();

    for (int r = 0; r < spec_.canvas_h; ++r) {
      for (int c = 0; c < spec_.canvas_w; ++c) {
        uint8_t rgb[3];
        double depth;
        if (occ && c >= occluder.x && c < occluder.x2() && r >= occluder.y &&
            r < occluder.y2()) {
          texel(2, static_cast<long>((r - occluder.y) / 10),
                static_cast<long>((c - occluder.x) / 10), rgb);
          depth = spec_.occluder_depth;
        } else if (c >= target.x && c < target.x2() && r >= target.y && r < target.y2()) {
          // Texture coordinates follow the target, so zoom rescales it.
          texel(1, static_cast<long>((r - target.y) / (8.0 * scale_y)),
                static_cast<long>((c - target.x) / (8.0 * scale_x)), rgb);
          depth = spec_.target_depth;
        } else {
          texel(0, r / 32, c / 32, rgb);
          depth = spec_.background_depth;
        }

        const uint64_t h = hash_combine(spec_.seed, t, r * 131071ull + c, 7);
        for (int ch = 0; ch < 3; ++ch) {
          const double noisy =
              rgb[ch] + spec_.rgb_noise * gauss(splitmix64(h ^ (0x51ull + ch)));
          frame.px(r, c)[ch] =
              static_cast<uint8_t>(std::lround(std::min(255.0, std::max(0.0, noisy))));
        }
        if (to_unit(splitmix64(h ^ 0x99ull)) < spec_.hole_rate) {
          frame.d(r, c) = 0;
        } else {
          const double noisy = depth + spec_.depth_noise * gauss(splitmix64(h ^ 0x77ull));
          frame.d(r, c) = static_cast<uint16_t>(std::lround(std::max(1.0, noisy)));
        }
      }
    }
    return frame;
  }

  BoundingBox box_at(int t) const {
    const double z = std::pow(spec_.target_zoom, t);
    const double w = spec_.target_w * z;
    const double h = spec_.target_h * z;
    const double cx = spec_.target_x + spec_.target_w / 2.0 + spec_.target_vx * t;
    const double cy = spec_.target_y + spec_.target_h / 2.0 + spec_.target_vy * t;
    return BoundingBox(cx - w / 2.0, cy - h / 2.0, w, h);
  }

  // Scheduled coverage fraction: linear ramp up, hold at peak, linear ramp down.
  double coverage_at(int t) const {
    if (!spec_.occluder_enabled) return 0.0;
    const int ramp = spec_.occlusion_ramp;
    const int up_end = spec_.occlusion_start + ramp;            // first full frame
    const int down_start = up_end + spec_.occlusion_hold;       // last full frame + 1
    if (t < spec_.occlusion_start || t >= down_start + ramp) return 0.0;
    double c;
    if (t < up_end)
      c = static_cast<double>(t - spec_.occlusion_start + 1) / ramp;
    else if (t < down_start)
      c = 1.0;
    else
      c = static_cast<double>(down_start + ramp - 1 - t) / ramp;
    return spec_.occlusion_peak * std::min(1.0, std::max(0.0, c));
  }

  // Occluder enters from the right of the target; its position is derived
  // from the scheduled coverage so the geometric overlap equals coverage_at
  // in every phase. With a full-cover schedule it passes through and exits
  // left; with a partial peak it retreats the way it came.
  BoundingBox occluder_at(int t) const {
    const BoundingBox target = box_at(t);
    const double w_o = 1.6 * target.w;
    const double h_o = 1.5 * target.h;
    const double y_o = target.center().y - h_o / 2.0;
    const int ramp = spec_.occlusion_ramp;
    const int up_end = spec_.occlusion_start + ramp;
    const int down_start = up_end + spec_.occlusion_hold;
    const bool passes_through = spec_.occlusion_peak >= 1.0;
    const double enter_speed = spec_.occlusion_peak * target.w / ramp;
    const double c = coverage_at(t);

    double left;
    if (t < spec_.occlusion_start) {
      left = target.x2() + (spec_.occlusion_start - t) * enter_speed;
    } else if (t < up_end) {
      left = target.x2() - c * target.w;
    } else if (t < down_start) {
      if (passes_through) {
        const double slack = w_o - target.w;
        const double s = spec_.occlusion_hold <= 1
                             ? 0.0
                             : static_cast<double>(t - up_end) / (spec_.occlusion_hold - 1);
        left = target.x - s * slack;
      } else {
        left = target.x2() - c * target.w;
      }
    } else if (passes_through) {
      left = target.x + c * target.w - w_o;
      if (c <= 0.0) left -= (t - (down_start + ramp - 1)) * enter_speed;
    } else {
      left = target.x2() - c * target.w;
      if (c <= 0.0) left += (t - (down_start + ramp - 1)) * enter_speed;
    }
    return BoundingBox(left, y_o, w_o, h_o);
  }

 private:
  // Blocky procedural texture; layer 0 = background (muted), 1 = target
  // (saturated), 2 = occluder (mid-tone).
  void texel(int layer, long bi, long bj, uint8_t out[3]) const {
    using namespace synth_detail;
    const uint64_t h = hash_combine(spec_.seed, layer * 1000003ull, static_cast<uint64_t>(bi),
                                    static_cast<uint64_t>(bj));
    const double u0 = to_unit(splitmix64(h ^ 1));
    const double u1 = to_unit(splitmix64(h ^ 2));
    const double u2 = to_unit(splitmix64(h ^ 3));
    if (layer == 0) {
      out[0] = static_cast<uint8_t>(40 + u0 * 80);
      out[1] = static_cast<uint8_t>(40 + u1 * 80);
      out[2] = static_cast<uint8_t>(40 + u2 * 80);
    } else if (layer == 1) {
      out[0] = static_cast<uint8_t>(140 + u0 * 115);
      out[1] = static_cast<uint8_t>(u1 * 120);
      out[2] = static_cast<uint8_t>(60 + u2 * 195);
    } else {
      out[0] = static_cast<uint8_t>(30 + u0 * 60);
      out[1] = static_cast<uint8_t>(120 + u1 * 135);
      out[2] = static_cast<uint8_t>(30 + u2 * 60);
    }
  }

  SyntheticSpec spec_;
};

// Materializes a synthetic sequence in the Princeton directory layout:
// rgb/ + depth/ PNG frames, init.txt, groundtruth.txt (NaN on heavily
// occluded frames), coverage.txt with the exact per-frame fraction.
inline Sequence generate_synthetic(const SyntheticSpec& spec, const std::string& out_dir) {
  namespace fs = std::filesystem;
  SyntheticSequence synth(spec);
  const fs::path root(out_dir);
  fs::create_directories(root / "rgb");
  fs::create_directories(root / "depth");

  std::ofstream gt(root / "groundtruth.txt");
  std::ofstream cov(root / "coverage.txt");
  if (!gt || !cov) throw IoError("cannot write sequence metadata in " + out_dir);

  char name[32];
  for (int t = 0; t < synth.frame_count(); ++t) {
    Frame frame = synth.render(t);
    std::snprintf(name, sizeof(name), "%05d.png", t);
    save_rgb8((root / "rgb" / name).string(), frame.width, frame.height, frame.rgb);
    save_gray16((root / "depth" / name).string(), frame.width, frame.height, frame.depth);

    const SyntheticTruth truth = synth.truth(t);
    if (truth.occluded_mark) {
      gt << "NaN,NaN,NaN,NaN\n";
    } else {
      gt << std::lround(truth.box.x) << ',' << std::lround(truth.box.y) << ','
         << std::lround(truth.box.x2()) << ',' << std::lround(truth.box.y2()) << '\n';
    }
    cov << truth.coverage << '\n';
  }
  gt.close();
  cov.close();

  const SyntheticTruth first = synth.truth(0);
  std::ofstream init(root / "init.txt");
  if (!init) throw IoError("cannot write init.txt in " + out_dir);
  init << std::lround(first.box.x) << ',' << std::lround(first.box.y) << ','
       << std::lround(first.box.w) << ',' << std::lround(first.box.h) << '\n';
  init.close();

  if (spec.occluder_enabled) {
    std::ofstream attrs(root / "attributes.txt");
    attrs << "rigid, occlusion\n";
  }
  return load_sequence(out_dir);
}

}  // namespace dmdcf
