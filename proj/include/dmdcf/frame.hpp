#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "dmdcf/errors.hpp"
#include "dmdcf/geometry.hpp"

namespace dmdcf {

// Synchronized RGB + depth pair. rgb is interleaved 8-bit, depth is
// millimeters with 0 reserved for "no measurement".
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> rgb;     // height*width*3
  std::vector<uint16_t> depth;  // height*width
  int64_t index = 0;

  Frame() = default;
  Frame(int w, int h) : width(w), height(h), rgb(static_cast<size_t>(w) * h * 3, 0), depth(static_cast<size_t>(w) * h, 0) {}

  bool valid() const {
    return width > 0 && height > 0 &&
           rgb.size() == static_cast<size_t>(width) * height * 3 &&
           depth.size() == static_cast<size_t>(width) * height;
  }

  const uint8_t* px(int r, int c) const { return &rgb[(static_cast<size_t>(r) * width + c) * 3]; }
  uint8_t* px(int r, int c) { return &rgb[(static_cast<size_t>(r) * width + c) * 3]; }
  uint16_t d(int r, int c) const { return depth[static_cast<size_t>(r) * width + c]; }
  uint16_t& d(int r, int c) { return depth[static_cast<size_t>(r) * width + c]; }
};

// Resampled search region cut from a frame. origin is the padded region in
// frame coordinates (may extend outside the frame).
struct Patch {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // height*width*3
  std::vector<uint16_t> depth;  // height*width
  BoundingBox origin;

  const uint8_t* px(int r, int c) const { return &pixels[(static_cast<size_t>(r) * width + c) * 3]; }
  uint16_t d(int r, int c) const { return depth[static_cast<size_t>(r) * width + c]; }
};

namespace detail {

inline int clamp_index(long v, int n) {
  if (v < 0) return 0;
  if (v >= n) return n - 1;
  return static_cast<int>(v);
}

}  // namespace detail

// Cuts the padding_factor^2 * (w*h) region centered at `center` and resamples
// it to template_size. RGB is sampled bilinearly with border replication;
// depth is sampled nearest-neighbor and reads outside the frame as missing (0),
// so padding never fabricates depth surfaces.
inline Patch extract_patch(const Frame& frame, Point center, SizeD size,
                           double padding_factor, int template_w, int template_h) {
  if (!frame.valid()) throw InvalidGeometryError("extract_patch: invalid frame");
  if (!(size.w > 0.0 && size.h > 0.0)) throw InvalidGeometryError("extract_patch: size must be positive");
  if (padding_factor < 1.0) throw InvalidGeometryError("extract_patch: padding_factor must be >= 1");
  if (template_w <= 0 || template_h <= 0) throw InvalidGeometryError("extract_patch: template size must be positive");

  const double pw = padding_factor * size.w;
  const double ph = padding_factor * size.h;
  if (std::lround(pw) <= 0 || std::lround(ph) <= 0)
    throw InvalidGeometryError("extract_patch: degenerate region after rounding");

  const double x0 = center.x - pw / 2.0;
  const double y0 = center.y - ph / 2.0;

  Patch patch;
  patch.width = template_w;
  patch.height = template_h;
  patch.pixels.resize(static_cast<size_t>(template_w) * template_h * 3);
  patch.depth.resize(static_cast<size_t>(template_w) * template_h);
  patch.origin = BoundingBox(x0, y0, pw, ph);

  const double sx_step = pw / template_w;
  const double sy_step = ph / template_h;

  for (int r = 0; r < template_h; ++r) {
    const double sy = y0 + (r + 0.5) * sy_step - 0.5;
    const double syf = std::floor(sy);
    const double fy = sy - syf;
    const int y_lo = detail::clamp_index(static_cast<long>(syf), frame.height);
    const int y_hi = detail::clamp_index(static_cast<long>(syf) + 1, frame.height);
    const long y_near = std::lround(sy);
    for (int c = 0; c < template_w; ++c) {
      const double sx = x0 + (c + 0.5) * sx_step - 0.5;
      const double sxf = std::floor(sx);
      const double fx = sx - sxf;
      const int x_lo = detail::clamp_index(static_cast<long>(sxf), frame.width);
      const int x_hi = detail::clamp_index(static_cast<long>(sxf) + 1, frame.width);

      const uint8_t* p00 = frame.px(y_lo, x_lo);
      const uint8_t* p01 = frame.px(y_lo, x_hi);
      const uint8_t* p10 = frame.px(y_hi, x_lo);
      const uint8_t* p11 = frame.px(y_hi, x_hi);
      uint8_t* out = &patch.pixels[(static_cast<size_t>(r) * template_w + c) * 3];
      for (int ch = 0; ch < 3; ++ch) {
        const double top = p00[ch] + fx * (p01[ch] - p00[ch]);
        const double bot = p10[ch] + fx * (p11[ch] - p10[ch]);
        const double v = top + fy * (bot - top);
        out[ch] = static_cast<uint8_t>(std::lround(std::min(255.0, std::max(0.0, v))));
      }

      const long x_near = std::lround(sx);
      uint16_t dv = 0;
      if (y_near >= 0 && y_near < frame.height && x_near >= 0 && x_near < frame.width)
        dv = frame.d(static_cast<int>(y_near), static_cast<int>(x_near));
      patch.depth[static_cast<size_t>(r) * template_w + c] = dv;
    }
  }
  return patch;
}

}  // namespace dmdcf
