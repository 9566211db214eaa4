#pragma once

#include <random>

#include "dmdcf/core/array.hpp"
#include "dmdcf/frame.hpp"

namespace dmdcf::testing {

inline Patch random_patch(int w, int h, std::mt19937& rng) {
  Patch p;
  p.width = w;
  p.height = h;
  p.pixels.resize(static_cast<size_t>(w) * h * 3);
  p.depth.resize(static_cast<size_t>(w) * h);
  std::uniform_int_distribution<int> u8(0, 255);
  std::uniform_int_distribution<int> mm(500, 4000);
  for (auto& v : p.pixels) v = static_cast<uint8_t>(u8(rng));
  for (auto& v : p.depth) v = static_cast<uint16_t>(mm(rng));
  p.origin = BoundingBox(0, 0, w, h);
  return p;
}

inline Patch constant_patch(int w, int h, uint8_t r, uint8_t g, uint8_t b,
                            uint16_t depth = 1000) {
  Patch p;
  p.width = w;
  p.height = h;
  p.pixels.resize(static_cast<size_t>(w) * h * 3);
  p.depth.assign(static_cast<size_t>(w) * h, depth);
  for (size_t i = 0; i < p.pixels.size(); i += 3) {
    p.pixels[i] = r;
    p.pixels[i + 1] = g;
    p.pixels[i + 2] = b;
  }
  p.origin = BoundingBox(0, 0, w, h);
  return p;
}

inline RealArray random_real(int rows, int cols, std::mt19937& rng, double lo = -1.0,
                             double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  RealArray out(rows, cols);
  for (auto& v : out) v = dist(rng);
  return out;
}

inline Frame random_frame(int w, int h, std::mt19937& rng) {
  Frame f(w, h);
  std::uniform_int_distribution<int> u8(0, 255);
  std::uniform_int_distribution<int> mm(500, 4000);
  for (auto& v : f.rgb) v = static_cast<uint8_t>(u8(rng));
  for (auto& v : f.depth) v = static_cast<uint16_t>(mm(rng));
  return f;
}

}  // namespace dmdcf::testing
