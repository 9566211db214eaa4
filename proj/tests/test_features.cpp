#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <random>

#include "dmdcf/features/features.hpp"
#include "oracles/reference_hog.hpp"
#include "test_util.hpp"

using namespace dmdcf;

TEST_CASE("constant patch produces near-zero HOG orientation channels") {
  Patch p = testing::constant_patch(32, 32, 90, 90, 90);
  auto hog = extract_hog(p, 4);
  REQUIRE(hog.size() == 31);
  for (int o = 0; o < 27; ++o)
    for (double v : hog[o]) REQUIRE(std::abs(v) < 1e-9);
}

TEST_CASE("vertical step edge concentrates in the horizontal-gradient bin") {
  Patch p = testing::constant_patch(32, 32, 40, 40, 40);
  for (int r = 0; r < 32; ++r)
    for (int c = 16; c < 32; ++c) {
      uint8_t* px = &p.pixels[(static_cast<size_t>(r) * 32 + c) * 3];
      px[0] = px[1] = px[2] = 220;
    }
  auto hog = extract_hog(p, 4);
  // Cells straddling the edge: the contrast-insensitive argmax must be the
  // horizontal-gradient orientation (bin 0 of channels 18..26).
  for (int i = 0; i < 8; ++i) {
    int best = -1;
    double best_v = -1.0;
    for (int o = 0; o < 9; ++o)
      if (hog[18 + o](i, 4) > best_v) {
        best_v = hog[18 + o](i, 4);
        best = o;
      }
    REQUIRE(best == 0);
    REQUIRE(best_v > 0.0);
  }
}

TEST_CASE("HOG matches the independent reference implementation") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 3; ++trial) {
    Patch p = testing::random_patch(40, 24, rng);
    auto fast = extract_hog(p, 4);
    auto ref = oracle::reference_hog(p, 4);
    REQUIRE(fast.size() == ref.size());
    for (size_t ch = 0; ch < ref.size(); ++ch)
      for (size_t i = 0; i < ref[ch].size(); ++i)
        REQUIRE_THAT(fast[ch][i], Catch::Matchers::WithinAbs(ref[ch][i], 1e-5));
  }
}

TEST_CASE("HOG values stay in [0, 1]") {
  std::mt19937 rng(32);
  Patch p = testing::random_patch(32, 32, rng);
  for (const auto& chan : extract_hog(p, 4))
    for (double v : chan) {
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0);
    }
}

TEST_CASE("HOG rejects indivisible dimensions") {
  std::mt19937 rng(33);
  Patch p = testing::random_patch(30, 30, rng);
  REQUIRE_THROWS_AS(extract_hog(p, 4), InvalidGeometryError);
}

TEST_CASE("color names table rows are probability vectors") {
  auto table = ColorNamesTable::generate();
  std::mt19937 rng(34);
  std::uniform_int_distribution<int> bin(0, 31);
  for (int i = 0; i < 500; ++i) {
    const float* row = table->row(bin(rng), bin(rng), bin(rng));
    double s = 0.0;
    for (int k = 0; k < ColorNamesTable::kChannels; ++k) {
      REQUIRE(row[k] >= 0.0f);
      s += row[k];
    }
    REQUIRE_THAT(s, Catch::Matchers::WithinAbs(1.0, 1e-3));
  }
}

TEST_CASE("saturated red maps to a dominant red channel in every cell") {
  auto table = ColorNamesTable::generate();
  Patch p = testing::constant_patch(16, 16, 255, 0, 0);
  auto cn = extract_color_names(p, *table, 4);
  REQUIRE(cn.size() == 10);
  // Channel order: black, blue, brown, gray, green, orange, pink, purple,
  // red, yellow -> red is channel 8.
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      int best = -1;
      double best_v = -1.0;
      for (int k = 0; k < 10; ++k)
        if (cn[k](i, j) > best_v) {
          best_v = cn[k](i, j);
          best = k;
        }
      REQUIRE(best == 8);
    }
}

TEST_CASE("constant patch gives spatially constant color-name channels") {
  auto table = ColorNamesTable::generate();
  Patch p = testing::constant_patch(24, 16, 30, 200, 90);
  auto cn = extract_color_names(p, *table, 4);
  for (const auto& chan : cn)
    for (double v : chan) REQUIRE_THAT(v, Catch::Matchers::WithinAbs(chan(0, 0), 1e-12));
}

TEST_CASE("two-tone cell equals the pixel-count-weighted table average") {
  auto table = ColorNamesTable::generate();
  Patch p = testing::constant_patch(4, 4, 255, 0, 0);
  // Recolor the top row (4 of 16 pixels) to blue.
  for (int c = 0; c < 4; ++c) {
    uint8_t* px = &p.pixels[static_cast<size_t>(c) * 3];
    px[0] = 0;
    px[1] = 0;
    px[2] = 255;
  }
  auto cn = extract_color_names(p, *table, 4);
  const float* red_row = table->lookup(255, 0, 0);
  const float* blue_row = table->lookup(0, 0, 255);
  for (int k = 0; k < 10; ++k) {
    const double expect = 0.25 * blue_row[k] + 0.75 * red_row[k];
    REQUIRE_THAT(cn[k](0, 0), Catch::Matchers::WithinAbs(expect, 1e-6));
  }
}

TEST_CASE("table file round trip and missing-file error") {
  auto table = ColorNamesTable::generate();
  const std::string path = "cn_roundtrip_test.bin";
  table->save(path);
  auto loaded = ColorNamesTable::load(path);
  REQUIRE(loaded->lookup(255, 0, 0)[8] == table->lookup(255, 0, 0)[8]);
  std::remove(path.c_str());
  REQUIRE_THROWS_AS(ColorNamesTable::load("does_not_exist.bin"), ConfigError);
}

TEST_CASE("gray extractor hits the documented extremes") {
  Patch black = testing::constant_patch(16, 16, 0, 0, 0);
  for (double v : extract_gray(black, 4)[0])
    REQUIRE_THAT(v, Catch::Matchers::WithinAbs(-0.5, 1e-12));

  Patch white = testing::constant_patch(16, 16, 255, 255, 255);
  for (double v : extract_gray(white, 4)[0])
    REQUIRE_THAT(v, Catch::Matchers::WithinAbs(0.5, 1e-9));
}

TEST_CASE("checkerboard at cell scale alternates extremes") {
  Patch p = testing::constant_patch(16, 16, 0, 0, 0);
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c)
      if (((r / 4) + (c / 4)) % 2 == 1) {
        uint8_t* px = &p.pixels[(static_cast<size_t>(r) * 16 + c) * 3];
        px[0] = px[1] = px[2] = 255;
      }
  auto gray = extract_gray(p, 4)[0];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double expect = ((i + j) % 2 == 1) ? 0.5 : -0.5;
      REQUIRE_THAT(gray(i, j), Catch::Matchers::WithinAbs(expect, 1e-9));
    }
}

TEST_CASE("compose concatenates the configured channels") {
  std::mt19937 rng(35);
  Patch p = testing::random_patch(32, 32, rng);

  FeatureConfig gray_only;
  gray_only.use_hog = false;
  gray_only.use_cn = false;
  REQUIRE(compose(p, gray_only).channel_count() == 1);

  FeatureConfig full;
  full.cn_table = ColorNamesTable::generate();
  FeatureStack stack = compose(p, full);
  REQUIRE(stack.channel_count() == 42);
  REQUIRE(stack.rows() == 8);
  REQUIRE(stack.cols() == 8);
}

TEST_CASE("compose without a table fails when color names are enabled") {
  std::mt19937 rng(36);
  Patch p = testing::random_patch(16, 16, rng);
  FeatureConfig cfg;  // cn enabled, table missing
  REQUIRE_THROWS_AS(compose(p, cfg), ConfigError);
}

TEST_CASE("windowing zeroes the border cells") {
  std::mt19937 rng(37);
  Patch p = testing::random_patch(32, 32, rng);
  FeatureConfig cfg;
  cfg.use_cn = false;
  FeatureStack stack = compose(p, cfg);
  for (const auto& chan : stack.channels) {
    for (int j = 0; j < chan.cols(); ++j) {
      REQUIRE(std::abs(chan(0, j)) < 1e-6);
      REQUIRE(std::abs(chan(chan.rows() - 1, j)) < 1e-6);
    }
    for (int i = 0; i < chan.rows(); ++i) {
      REQUIRE(std::abs(chan(i, 0)) < 1e-6);
      REQUIRE(std::abs(chan(i, chan.cols() - 1)) < 1e-6);
    }
  }
}

TEST_CASE("extraction is deterministic") {
  std::mt19937 rng(38);
  Patch p = testing::random_patch(32, 32, rng);
  FeatureConfig cfg;
  cfg.cn_table = ColorNamesTable::generate();
  FeatureStack a = compose(p, cfg);
  FeatureStack b = compose(p, cfg);
  for (size_t ch = 0; ch < a.channels.size(); ++ch) REQUIRE(a.channels[ch] == b.channels[ch]);
}
