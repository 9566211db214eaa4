#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "dmdcf/errors.hpp"

namespace dmdcf {

// Quantized RGB -> 10 color-name probabilities.
//
// File layout (data/colornames.bin): little-endian float32, 32768 rows of 10
// values, row index = (r_q * 32 + g_q) * 32 + b_q with q = floor(v / 8).
// Every row is a probability vector (sums to 1).
class ColorNamesTable {
 public:
  static constexpr int kChannels = 10;
  static constexpr int kBins = 32;
  static constexpr size_t kRows = static_cast<size_t>(kBins) * kBins * kBins;

  static std::shared_ptr<ColorNamesTable> load(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw ConfigError("color names table not found: " + path);
    auto table = std::make_shared<ColorNamesTable>();
    table->data_.resize(kRows * kChannels);
    const size_t got = std::fread(table->data_.data(), sizeof(float), table->data_.size(), f);
    std::fclose(f);
    if (got != table->data_.size())
      throw ConfigError("color names table truncated: " + path);
    return table;
  }

  void save(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw IoError("cannot write color names table: " + path);
    const size_t put = std::fwrite(data_.data(), sizeof(float), data_.size(), f);
    std::fclose(f);
    if (put != data_.size()) throw IoError("short write: " + path);
  }

  // Procedural stand-in for the published color-name statistics: soft
  // assignment of each quantized RGB bin to 10 named prototype colors.
  static std::shared_ptr<ColorNamesTable> generate() {
    struct Proto {
      double r, g, b;
    };
    static const std::array<Proto, kChannels> kProtos = {{
        {0, 0, 0},        // black
        {0, 0, 255},      // blue
        {120, 70, 20},    // brown
        {128, 128, 128},  // gray
        {0, 160, 0},      // green
        {255, 150, 0},    // orange
        {255, 120, 190},  // pink
        {140, 0, 180},    // purple
        {255, 0, 0},      // red
        {255, 255, 0},    // yellow
    }};
    const double two_sigma_sq = 2.0 * 60.0 * 60.0;

    auto table = std::make_shared<ColorNamesTable>();
    table->data_.resize(kRows * kChannels);
    for (int rq = 0; rq < kBins; ++rq) {
      for (int gq = 0; gq < kBins; ++gq) {
        for (int bq = 0; bq < kBins; ++bq) {
          const double r = rq * 8.0 + 3.5;
          const double g = gq * 8.0 + 3.5;
          const double b = bq * 8.0 + 3.5;
          double w[kChannels];
          double total = 0.0;
          for (int i = 0; i < kChannels; ++i) {
            const double dr = r - kProtos[i].r;
            const double dg = g - kProtos[i].g;
            const double db = b - kProtos[i].b;
            w[i] = std::exp(-(dr * dr + dg * dg + db * db) / two_sigma_sq);
            total += w[i];
          }
          float* row = table->row_ptr(rq, gq, bq);
          for (int i = 0; i < kChannels; ++i)
            row[i] = static_cast<float>(w[i] / total);
        }
      }
    }
    return table;
  }

  const float* lookup(uint8_t r, uint8_t g, uint8_t b) const {
    return &data_[row_index(r >> 3, g >> 3, b >> 3) * kChannels];
  }

  const float* row(int rq, int gq, int bq) const {
    return &data_[row_index(rq, gq, bq) * kChannels];
  }

 private:
  float* row_ptr(int rq, int gq, int bq) { return &data_[row_index(rq, gq, bq) * kChannels]; }

  static size_t row_index(int rq, int gq, int bq) {
    return (static_cast<size_t>(rq) * kBins + gq) * kBins + bq;
  }

  std::vector<float> data_;
};

}  // namespace dmdcf
