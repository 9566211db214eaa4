#pragma once

#include <cmath>
#include <vector>

#include "dmdcf/core/array.hpp"
#include "dmdcf/errors.hpp"
#include "dmdcf/frame.hpp"

namespace dmdcf {

// Felzenszwalb HOG, 31 channels per cell: 18 contrast-sensitive orientation
// bins, 9 contrast-insensitive bins, 4 texture-energy features.
//
// Pinned algorithm details (the test-side reference implements the same
// definition independently):
//  - centered differences with clamped borders, per RGB channel, keep the
//    channel with the largest gradient magnitude;
//  - signed orientation bin = floor(atan2(gy, gx) mapped to [0, 2pi) / (2pi/18));
//  - bilinear spatial voting onto cell centers, spill outside the grid dropped;
//  - block normalizers over the four 2x2 cell neighborhoods, indices clamped
//    at the grid border, eps = 1e-4, truncation at 0.2;
//  - texture features scaled by 0.2357.
namespace hog_detail {

constexpr int kSignedBins = 18;
constexpr int kUnsignedBins = 9;
constexpr int kChannels = 31;
constexpr double kEps = 1e-4;
constexpr double kTruncation = 0.2;
constexpr double kTextureScale = 0.2357;

inline void pixel_gradient(const Patch& p, int r, int c, double& gx, double& gy) {
  const int cl = c > 0 ? c - 1 : 0;
  const int cr = c < p.width - 1 ? c + 1 : p.width - 1;
  const int ru = r > 0 ? r - 1 : 0;
  const int rd = r < p.height - 1 ? r + 1 : p.height - 1;
  double best = -1.0;
  for (int ch = 0; ch < 3; ++ch) {
    const double dx = static_cast<double>(p.px(r, cr)[ch]) - p.px(r, cl)[ch];
    const double dy = static_cast<double>(p.px(rd, c)[ch]) - p.px(ru, c)[ch];
    const double mag = dx * dx + dy * dy;
    if (mag > best) {
      best = mag;
      gx = dx;
      gy = dy;
    }
  }
}

inline int orientation_bin(double gx, double gy) {
  double theta = std::atan2(gy, gx);
  if (theta < 0.0) theta += 2.0 * M_PI;
  int bin = static_cast<int>(theta / (2.0 * M_PI / kSignedBins));
  return bin >= kSignedBins ? kSignedBins - 1 : bin;
}

}  // namespace hog_detail

inline std::vector<RealArray> extract_hog(const Patch& patch, int cell_size) {
  using namespace hog_detail;
  if (cell_size <= 0 || patch.width % cell_size != 0 || patch.height % cell_size != 0)
    throw InvalidGeometryError("extract_hog: patch dimensions not divisible by cell size");

  const int cw = patch.width / cell_size;
  const int ch = patch.height / cell_size;

  // Orientation histograms, one plane per signed bin.
  std::vector<RealArray> hist(kSignedBins, RealArray(ch, cw, 0.0));
  for (int r = 0; r < patch.height; ++r) {
    const double u = (r + 0.5) / cell_size - 0.5;
    const int i0 = static_cast<int>(std::floor(u));
    const double fy = u - i0;
    for (int c = 0; c < patch.width; ++c) {
      double gx = 0.0, gy = 0.0;
      pixel_gradient(patch, r, c, gx, gy);
      const double v = std::sqrt(gx * gx + gy * gy);
      if (v == 0.0) continue;
      const int bin = orientation_bin(gx, gy);
      const double w = (c + 0.5) / cell_size - 0.5;
      const int j0 = static_cast<int>(std::floor(w));
      const double fx = w - j0;
      RealArray& plane = hist[bin];
      if (i0 >= 0 && j0 >= 0) plane(i0, j0) += v * (1.0 - fy) * (1.0 - fx);
      if (i0 >= 0 && j0 + 1 < cw) plane(i0, j0 + 1) += v * (1.0 - fy) * fx;
      if (i0 + 1 < ch && j0 >= 0) plane(i0 + 1, j0) += v * fy * (1.0 - fx);
      if (i0 + 1 < ch && j0 + 1 < cw) plane(i0 + 1, j0 + 1) += v * fy * fx;
    }
  }

  // Contrast-insensitive energy per cell.
  RealArray energy(ch, cw, 0.0);
  for (int o = 0; o < kUnsignedBins; ++o)
    for (int i = 0; i < ch; ++i)
      for (int j = 0; j < cw; ++j) {
        const double s = hist[o](i, j) + hist[o + kUnsignedBins](i, j);
        energy(i, j) += s * s;
      }

  auto e_at = [&](int i, int j) {
    i = std::min(std::max(i, 0), ch - 1);
    j = std::min(std::max(j, 0), cw - 1);
    return energy(i, j);
  };

  std::vector<RealArray> out(kChannels, RealArray(ch, cw, 0.0));
  for (int i = 0; i < ch; ++i) {
    for (int j = 0; j < cw; ++j) {
      double n[4];
      int idx = 0;
      for (int di = -1; di <= 1; di += 2)
        for (int dj = -1; dj <= 1; dj += 2)
          n[idx++] = 1.0 / std::sqrt(e_at(i, j) + e_at(i + di, j) + e_at(i, j + dj) +
                                     e_at(i + di, j + dj) + kEps);
      double texture[4] = {0, 0, 0, 0};
      for (int o = 0; o < kSignedBins; ++o) {
        const double h = hist[o](i, j);
        double acc = 0.0;
        for (int d = 0; d < 4; ++d) {
          const double t = std::min(h * n[d], kTruncation);
          acc += t;
          texture[d] += t;
        }
        out[o](i, j) = 0.5 * acc;
      }
      for (int o = 0; o < kUnsignedBins; ++o) {
        const double h = hist[o](i, j) + hist[o + kUnsignedBins](i, j);
        double acc = 0.0;
        for (int d = 0; d < 4; ++d) acc += std::min(h * n[d], kTruncation);
        out[kSignedBins + o](i, j) = 0.5 * acc;
      }
      for (int d = 0; d < 4; ++d)
        out[kSignedBins + kUnsignedBins + d](i, j) = kTextureScale * texture[d];
    }
  }
  return out;
}

}  // namespace dmdcf
