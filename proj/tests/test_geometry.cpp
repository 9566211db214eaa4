#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "dmdcf/geometry.hpp"

using namespace dmdcf;

TEST_CASE("iou of identical boxes is exactly 1") {
  BoundingBox b(3.5, -2.0, 12.0, 7.5);
  REQUIRE(iou(b, b) == 1.0);
}

TEST_CASE("iou of disjoint boxes is 0") {
  BoundingBox a(0, 0, 10, 10);
  BoundingBox b(20, 20, 5, 5);
  REQUIRE(iou(a, b) == 0.0);
}

TEST_CASE("iou half-overlap example") {
  BoundingBox a(0, 0, 10, 10);
  BoundingBox b(5, 0, 10, 10);
  REQUIRE_THAT(iou(a, b), Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-12));
}

TEST_CASE("iou is symmetric") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coord(-20.0, 20.0);
  std::uniform_real_distribution<double> extent(0.5, 30.0);
  for (int i = 0; i < 200; ++i) {
    BoundingBox a(coord(rng), coord(rng), extent(rng), extent(rng));
    BoundingBox b(coord(rng), coord(rng), extent(rng), extent(rng));
    REQUIRE(iou(a, b) == iou(b, a));
    const double v = iou(a, b);
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1.0);
  }
}

TEST_CASE("iou rejects degenerate boxes") {
  BoundingBox bad(0, 0, 0, 10);
  BoundingBox good(0, 0, 5, 5);
  REQUIRE_THROWS_AS(iou(bad, good), InvalidGeometryError);
}

TEST_CASE("box center round trip") {
  BoundingBox b(10, 20, 30, 40);
  BoundingBox b2 = BoundingBox::from_center(b.center(), {b.w, b.h});
  REQUIRE_THAT(b2.x, Catch::Matchers::WithinAbs(b.x, 1e-12));
  REQUIRE_THAT(b2.y, Catch::Matchers::WithinAbs(b.y, 1e-12));
}
