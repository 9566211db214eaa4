#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "dmdcf/core/array.hpp"
#include "dmdcf/errors.hpp"
#include "dmdcf/features/color_names.hpp"
#include "dmdcf/features/hog.hpp"
#include "dmdcf/frame.hpp"

namespace dmdcf {

enum class ChannelSource { kHog, kCn, kGray };

// Multi-channel feature tensor at cell resolution. After compose() every
// channel has been multiplied by the same cosine window.
struct FeatureStack {
  std::vector<RealArray> channels;
  std::vector<ChannelSource> labels;
  int cell_size = 1;

  int rows() const { return channels.empty() ? 0 : channels.front().rows(); }
  int cols() const { return channels.empty() ? 0 : channels.front().cols(); }
  size_t channel_count() const { return channels.size(); }
};

struct FeatureConfig {
  bool use_hog = true;
  bool use_cn = true;
  bool use_gray = true;
  int cell_size = 4;
  std::shared_ptr<const ColorNamesTable> cn_table;
};

inline RealArray hann_window(int rows, int cols) {
  auto h1 = [](int i, int n) {
    return n == 1 ? 1.0 : 0.5 * (1.0 - std::cos(2.0 * M_PI * i / (n - 1)));
  };
  RealArray w(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) w(r, c) = h1(r, rows) * h1(c, cols);
  return w;
}

inline std::vector<RealArray> extract_color_names(const Patch& patch,
                                                  const ColorNamesTable& table,
                                                  int cell_size) {
  if (cell_size <= 0 || patch.width % cell_size != 0 || patch.height % cell_size != 0)
    throw InvalidGeometryError("extract_color_names: patch dimensions not divisible by cell size");
  const int cw = patch.width / cell_size;
  const int ch = patch.height / cell_size;
  std::vector<RealArray> out(ColorNamesTable::kChannels, RealArray(ch, cw, 0.0));
  const double inv_area = 1.0 / (static_cast<double>(cell_size) * cell_size);
  for (int r = 0; r < patch.height; ++r) {
    const int i = r / cell_size;
    for (int c = 0; c < patch.width; ++c) {
      const int j = c / cell_size;
      const uint8_t* px = patch.px(r, c);
      const float* probs = table.lookup(px[0], px[1], px[2]);
      for (int k = 0; k < ColorNamesTable::kChannels; ++k)
        out[k](i, j) += probs[k] * inv_area;
    }
  }
  return out;
}

// Zero-centered per-cell mean gray level in [-0.5, 0.5].
inline std::vector<RealArray> extract_gray(const Patch& patch, int cell_size) {
  if (cell_size <= 0 || patch.width % cell_size != 0 || patch.height % cell_size != 0)
    throw InvalidGeometryError("extract_gray: patch dimensions not divisible by cell size");
  const int cw = patch.width / cell_size;
  const int ch = patch.height / cell_size;
  std::vector<RealArray> out(1, RealArray(ch, cw, 0.0));
  const double inv_area = 1.0 / (static_cast<double>(cell_size) * cell_size);
  for (int r = 0; r < patch.height; ++r) {
    const int i = r / cell_size;
    for (int c = 0; c < patch.width; ++c) {
      const uint8_t* px = patch.px(r, c);
      const double g = (0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2]) / 255.0 - 0.5;
      out[0](i, c / cell_size) += g * inv_area;
    }
  }
  return out;
}

inline FeatureStack compose(const Patch& patch, const FeatureConfig& cfg) {
  FeatureStack stack;
  stack.cell_size = cfg.cell_size;
  if (cfg.use_hog) {
    auto hog = extract_hog(patch, cfg.cell_size);
    for (auto& c : hog) {
      stack.channels.push_back(std::move(c));
      stack.labels.push_back(ChannelSource::kHog);
    }
  }
  if (cfg.use_cn) {
    if (!cfg.cn_table) throw ConfigError("compose: color names enabled but no table loaded");
    auto cn = extract_color_names(patch, *cfg.cn_table, cfg.cell_size);
    for (auto& c : cn) {
      stack.channels.push_back(std::move(c));
      stack.labels.push_back(ChannelSource::kCn);
    }
  }
  if (cfg.use_gray) {
    auto gray = extract_gray(patch, cfg.cell_size);
    for (auto& c : gray) {
      stack.channels.push_back(std::move(c));
      stack.labels.push_back(ChannelSource::kGray);
    }
  }
  if (stack.channels.empty()) throw ConfigError("compose: no feature channels enabled");

  const RealArray window = hann_window(stack.rows(), stack.cols());
  for (auto& c : stack.channels)
    for (size_t i = 0; i < c.size(); ++i) c[i] *= window[i];
  return stack;
}

}  // namespace dmdcf
