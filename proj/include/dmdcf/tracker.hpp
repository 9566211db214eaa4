#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "dmdcf/dcf.hpp"
#include "dmdcf/depth_mask.hpp"
#include "dmdcf/errors.hpp"
#include "dmdcf/features/features.hpp"
#include "dmdcf/frame.hpp"
#include "dmdcf/geometry.hpp"
#include "dmdcf/masked_filter.hpp"
#include "dmdcf/occlusion.hpp"

namespace dmdcf {

struct TrackerConfig {
  double psi = 0.03;     // filter update rate
  double theta = 0.95;   // depth mean update rate
  double gamma = 0.20;   // depth std update rate
  double lambda = 0.01;  // ridge regularization
  double padding = 2.0;  // search region scale per axis
  int cell_size = 4;
  int template_longer_side = 200;          // padded template budget in pixels
  double output_sigma_divisor = 16.0;      // sigma = sqrt(fw * fh) / divisor (cells)
  std::vector<double> scale_factors = {0.985, 1.0, 1.015};
  double scale_penalty = 0.995;            // damping applied to non-unit scales
  double sigma_min_mm = 20.0;
  bool use_depth_mask = true;   // ablation toggle: all-ones mask when false
  bool use_occlusion = true;    // ablation toggle: never switches to detection mode
  bool warm_start = true;       // seed ADMM from the previous filter
  bool mask_fixed_threshold = false;  // fixed ratio threshold instead of Otsu
  double omega = 1.0;
  OcclusionConfig occlusion;
  AdmmConfig admm;
  FeatureConfig features;

  void validate() const {
    auto rate = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!rate(psi) || !rate(theta) || !rate(gamma))
      throw ConfigError("tracker config: update rates must lie in [0, 1]");
    if (lambda < 0.0) throw ConfigError("tracker config: lambda must be nonnegative");
    if (padding < 1.0) throw ConfigError("tracker config: padding must be >= 1");
    if (cell_size < 1) throw ConfigError("tracker config: cell_size must be positive");
    if (template_longer_side < 4 * cell_size)
      throw ConfigError("tracker config: template size too small");
    bool has_unit = false;
    for (double f : scale_factors) {
      if (f <= 0.0) throw ConfigError("tracker config: scale factors must be positive");
      if (std::abs(f - 1.0) < 1e-12) has_unit = true;
    }
    if (!has_unit) throw ConfigError("tracker config: scale factors must include 1.0");
    auto frac = [](double v) { return v > 0.0 && v <= 1.0; };
    if (!frac(occlusion.response_drop) || !frac(occlusion.depth_support_min) ||
        !frac(occlusion.tau))
      throw ConfigError("tracker config: occlusion thresholds must lie in (0, 1]");
    if (admm.mu0 <= 0.0 || admm.beta < 1.0 || admm.iterations < 1)
      throw ConfigError("tracker config: invalid ADMM settings");
  }
};

struct TrackerState {
  Point position;
  SizeD size;
  FilterBank filter;
  std::optional<DepthModel> depth_model;
  bool depth_free = false;  // no usable depth at init; all-ones masks throughout
  ResponseHistory history{100};
  OcclusionState occlusion;
  Mask mask;
  int template_w = 0;
  int template_h = 0;
  int64_t last_index = -1;

  BoundingBox box() const { return BoundingBox::from_center(position, size); }
};

struct TrackOutcome {
  BoundingBox box;
  bool occluded = false;
  bool ok = true;  // false: frame skipped after an internal error, box repeats
};

// Bitwise digest over the frozen model parts (filter, depth model, response
// history); used to assert that occluded frames mutate nothing.
inline uint64_t state_digest(const TrackerState& s) {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* p, size_t bytes) {
    const auto* b = static_cast<const uint8_t*>(p);
    for (size_t i = 0; i < bytes; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  };
  auto mix_d = [&](double v) { mix(&v, sizeof(v)); };
  for (const auto& chan : s.filter.h_hat)
    mix(chan.data(), chan.size() * sizeof(Complex));
  if (s.depth_model) {
    mix_d(s.depth_model->mu_fg);
    mix_d(s.depth_model->sigma_fg);
    mix_d(s.depth_model->mu_bg);
    mix_d(s.depth_model->sigma_bg);
  }
  mix_d(s.history.running_mean());
  uint64_t n = s.history.count();
  mix(&n, sizeof(n));
  for (double v : s.history.buffer()) mix_d(v);
  return h;
}

class Tracker {
 public:
  explicit Tracker(TrackerConfig config = {}) : cfg_(std::move(config)) {
    cfg_.validate();
    cfg_.features.cell_size = cfg_.cell_size;
  }

  const TrackerConfig& config() const { return cfg_; }

  TrackerState init(const Frame& frame, const BoundingBox& box) const {
    if (!frame.valid()) throw InvalidGeometryError("init: invalid frame");
    if (!box.valid()) throw InvalidGeometryError("init: degenerate box");

    TrackerState st;
    st.history = ResponseHistory(cfg_.occlusion.history_length);
    st.position = clamp_into(box.center(), frame);
    st.size = {box.w, box.h};
    template_geometry(st.size, st.template_w, st.template_h);

    Patch patch = extract_patch(frame, st.position, st.size, cfg_.padding, st.template_w,
                                st.template_h);
    const RectI box_px = unpadded_region(st);

    if (cfg_.use_depth_mask) {
      try {
        st.depth_model = init_model(patch, box_px, cfg_.theta, cfg_.gamma, cfg_.sigma_min_mm);
      } catch (const InitializationError&) {
        st.depth_free = true;
      }
    }

    st.mask = make_mask(st, patch, box_px);
    Mask training = st.mask.active_cells() ? st.mask : all_ones_mask(st);

    FeatureStack feats = compose(patch, cfg_.features);
    const ComplexArray y_hat = desired_output(st);
    st.filter = solve_masked(feats, y_hat, cfg_.lambda, training, cfg_.admm);

    ResponseMap self = respond(st.filter, feats, uniform_weights(feats.channel_count()));
    st.history.record(self.peak_value);
    st.last_index = frame.index;
    return st;
  }

  TrackOutcome track(TrackerState& st, const Frame& frame) const {
    if (frame.index <= st.last_index)
      throw InvalidGeometryError("track: frame index must be strictly increasing");
    try {
      return st.occlusion.occluded ? detection_step(st, frame) : tracking_step(st, frame);
    } catch (const Error&) {
      st.last_index = frame.index;
      return {st.box(), st.occlusion.occluded, false};
    }
  }

  // Evaluates the filter at per-axis relative scales and returns the best
  // (scale, response); non-unit scales are slightly damped so a static
  // target settles at 1.0.
  std::pair<double, ResponseMap> scale_search(const TrackerState& st,
                                              const Frame& frame) const {
    double best_scale = 1.0;
    double best_score = -std::numeric_limits<double>::infinity();
    ResponseMap best_resp;
    const auto weights = uniform_weights(st.filter.channel_count());
    for (double f : cfg_.scale_factors) {
      SizeD scaled{st.size.w * f, st.size.h * f};
      Patch patch = extract_patch(frame, st.position, scaled, cfg_.padding, st.template_w,
                                  st.template_h);
      FeatureStack feats = compose(patch, cfg_.features);
      ResponseMap resp = respond(st.filter, feats, weights);
      const double score =
          resp.peak_value * (std::abs(f - 1.0) < 1e-12 ? 1.0 : cfg_.scale_penalty);
      if (score > best_score) {
        best_score = score;
        best_scale = f;
        best_resp = std::move(resp);
      }
    }
    return {best_scale, std::move(best_resp)};
  }

 private:
  TrackOutcome tracking_step(TrackerState& st, const Frame& frame) const {
    auto [scale, resp] = scale_search(st, frame);
    const double r_max = resp.peak_value;

    SizeD new_size{st.size.w * scale, st.size.h * scale};
    const int cells_x = st.template_w / cfg_.cell_size;
    const int cells_y = st.template_h / cfg_.cell_size;
    Point new_pos{st.position.x + resp.disp_col() * (cfg_.padding * new_size.w / cells_x),
                  st.position.y + resp.disp_row() * (cfg_.padding * new_size.h / cells_y)};
    new_pos = clamp_into(new_pos, frame);

    Patch patch =
        extract_patch(frame, new_pos, new_size, cfg_.padding, st.template_w, st.template_h);
    TrackerState staged = st;  // commit-on-success; errors leave `st` untouched
    staged.position = new_pos;
    staged.size = new_size;
    staged.mask = make_mask(staged, patch, unpadded_region(staged));

    bool occluded = false;
    if (cfg_.use_occlusion)
      occluded = detect_occlusion(r_max, st.history, staged.mask, cfg_.occlusion).value_or(false);

    if (occluded) {
      staged.occlusion = {true, 1};
    } else {
      staged.occlusion = {false, 0};
      if (staged.depth_model)
        staged.depth_model = update_model(*staged.depth_model, patch, staged.mask);
      Mask training = staged.mask.active_cells() ? staged.mask : all_ones_mask(staged);
      FeatureStack feats = compose(patch, cfg_.features);
      FilterBank fresh = solve_masked(feats, staged.filter.y_hat, cfg_.lambda, training,
                                      cfg_.admm, cfg_.warm_start ? &staged.filter : nullptr);
      staged.filter = update_model(staged.filter, fresh, cfg_.psi);
      staged.history.record(r_max);
    }

    staged.last_index = frame.index;
    st = std::move(staged);
    return {st.box(), st.occlusion.occluded, true};
  }

  TrackOutcome detection_step(TrackerState& st, const Frame& frame) const {
    auto found = redetect(frame, st.filter, st.history, cfg_.occlusion, cfg_.features,
                          st.size, cfg_.padding, st.template_w, st.template_h,
                          uniform_weights(st.filter.channel_count()));
    if (found) {
      // Resume tracking at the recovered position; model updates restart on
      // the next visible frame.
      st.position = clamp_into(found->position, frame);
      st.occlusion = {false, 0};
    } else {
      ++st.occlusion.frames_occluded;
    }
    st.last_index = frame.index;
    return {st.box(), st.occlusion.occluded, true};
  }

  ComplexArray desired_output(const TrackerState& st) const {
    const int fw = st.template_w / cfg_.cell_size;
    const int fh = st.template_h / cfg_.cell_size;
    const double sigma = std::sqrt(static_cast<double>(fw) * fh) / cfg_.output_sigma_divisor;
    return make_desired_output(fh, fw, sigma);
  }

  Mask make_mask(const TrackerState& st, const Patch& patch, const RectI& box_px) const {
    if (!cfg_.use_depth_mask || st.depth_free || !st.depth_model) return all_ones_mask(st);
    MaskConfig mc;
    mc.cell_size = cfg_.cell_size;
    mc.use_otsu = !cfg_.mask_fixed_threshold;
    mc.omega = cfg_.omega;
    return build_mask(patch, *st.depth_model, box_px, mc);
  }

  Mask all_ones_mask(const TrackerState& st) const {
    return Mask::all_ones(st.template_h / cfg_.cell_size, st.template_w / cfg_.cell_size,
                          st.template_h, st.template_w);
  }

  // Template sides: longer padded side resized to the configured budget,
  // cell counts rounded to even.
  void template_geometry(SizeD size, int& tw, int& th) const {
    const double pw = cfg_.padding * size.w;
    const double ph = cfg_.padding * size.h;
    const double scale = cfg_.template_longer_side / std::max(pw, ph);
    auto even_cells = [&](double px) {
      int cells = static_cast<int>(std::lround(px * scale / cfg_.cell_size / 2.0)) * 2;
      return std::max(4, cells);
    };
    tw = even_cells(pw) * cfg_.cell_size;
    th = even_cells(ph) * cfg_.cell_size;
  }

  RectI unpadded_region(const TrackerState& st) const {
    const double bw = st.template_w / cfg_.padding;
    const double bh = st.template_h / cfg_.padding;
    RectI r;
    r.x = static_cast<int>(std::lround((st.template_w - bw) / 2.0));
    r.y = static_cast<int>(std::lround((st.template_h - bh) / 2.0));
    r.w = std::max(1, static_cast<int>(std::lround(bw)));
    r.h = std::max(1, static_cast<int>(std::lround(bh)));
    return r;
  }

  static Point clamp_into(Point p, const Frame& f) {
    return {std::min(std::max(p.x, 0.0), static_cast<double>(f.width - 1)),
            std::min(std::max(p.y, 0.0), static_cast<double>(f.height - 1))};
  }

  TrackerConfig cfg_;
};

}  // namespace dmdcf
