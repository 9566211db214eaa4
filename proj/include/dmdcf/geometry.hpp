#pragma once

#include <algorithm>
#include <cmath>

#include "dmdcf/errors.hpp"

namespace dmdcf {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct SizeD {
  double w = 0.0;
  double h = 0.0;
};

// Axis-aligned box, top-left corner + extent, real-valued pixels.
// Boxes may extend beyond frame borders; patch extraction pads.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  BoundingBox() = default;
  BoundingBox(double x_, double y_, double w_, double h_) : x(x_), y(y_), w(w_), h(h_) {}

  static BoundingBox from_center(Point c, SizeD s) {
    return BoundingBox(c.x - s.w / 2.0, c.y - s.h / 2.0, s.w, s.h);
  }

  bool valid() const { return w > 0.0 && h > 0.0 && std::isfinite(x) && std::isfinite(y); }
  double area() const { return w * h; }
  Point center() const { return {x + w / 2.0, y + h / 2.0}; }
  double x2() const { return x + w; }
  double y2() const { return y + h; }
};

inline double iou(const BoundingBox& a, const BoundingBox& b) {
  if (!a.valid() || !b.valid()) throw InvalidGeometryError("iou: degenerate box");
  const double ix = std::max(0.0, std::min(a.x2(), b.x2()) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y2(), b.y2()) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return inter / uni;
}

}  // namespace dmdcf
