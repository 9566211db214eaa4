#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dmdcf/errors.hpp"
#include "dmdcf/frame.hpp"
#include "dmdcf/geometry.hpp"
#include "dmdcf/io/png_io.hpp"

namespace dmdcf {

inline const std::set<std::string>& known_category_tags() {
  static const std::set<std::string> tags = {
      "human", "animal", "rigid",     "large",        "small",        "slow",
      "fast",  "occlusion", "no_occlusion", "passive_motion", "active_motion"};
  return tags;
}

// Princeton-style sequence directory:
//   <dir>/rgb/*.png, <dir>/depth/*.png   frames paired by sorted order
//   <dir>/init.txt                       "x,y,w,h"
//   <dir>/groundtruth.txt (optional)     per frame "x1,y1,x2,y2" or NaN line
//   <dir>/attributes.txt (optional)      category tags
//   <dir>/coverage.txt (optional)        per-frame occlusion fraction
struct Sequence {
  std::string name;
  std::vector<std::pair<std::string, std::string>> frames;  // (rgb, depth) paths
  BoundingBox init_box;
  std::optional<std::vector<std::optional<BoundingBox>>> ground_truth;
  std::vector<std::string> category_tags;
  std::vector<double> coverage;
};

namespace seq_detail {

inline std::vector<std::string> sorted_pngs(const std::filesystem::path& dir) {
  std::vector<std::string> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".png")
      out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> parts;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  return parts;
}

inline bool is_nan_token(const std::string& s) {
  std::string t;
  for (char c : s)
    t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return t == "nan";
}

inline std::optional<BoundingBox> parse_corner_line(const std::string& line,
                                                    const std::string& context) {
  auto parts = split_csv(line);
  if (parts.size() != 4)
    throw IngestionError(context + ": expected 4 comma-separated values, got '" + line + "'");
  if (is_nan_token(parts[0])) return std::nullopt;
  try {
    const double x1 = std::stod(parts[0]);
    const double y1 = std::stod(parts[1]);
    const double x2 = std::stod(parts[2]);
    const double y2 = std::stod(parts[3]);
    return BoundingBox(x1, y1, x2 - x1, y2 - y1);
  } catch (const std::exception&) {
    throw IngestionError(context + ": unparseable line '" + line + "'");
  }
}

}  // namespace seq_detail

inline Sequence load_sequence(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  if (!fs::is_directory(root)) throw IngestionError("not a sequence directory: " + dir);

  Sequence seq;
  seq.name = root.filename().string();
  if (seq.name.empty()) seq.name = root.parent_path().filename().string();

  auto rgb = seq_detail::sorted_pngs(root / "rgb");
  auto depth = seq_detail::sorted_pngs(root / "depth");
  if (rgb.empty()) throw IngestionError(dir + ": no rgb frames found");
  if (rgb.size() != depth.size()) {
    const size_t idx = std::min(rgb.size(), depth.size()) + 1;
    throw IngestionError(dir + ": rgb has " + std::to_string(rgb.size()) + " frames, depth has " +
                         std::to_string(depth.size()) + "; first unpaired index " +
                         std::to_string(idx));
  }
  for (size_t i = 0; i < rgb.size(); ++i) seq.frames.emplace_back(rgb[i], depth[i]);

  std::ifstream init(root / "init.txt");
  if (!init) throw IngestionError(dir + ": missing init.txt");
  std::string line;
  std::getline(init, line);
  auto parts = seq_detail::split_csv(seq_detail::trim(line));
  if (parts.size() != 4) throw IngestionError(dir + ": init.txt must contain x,y,w,h");
  try {
    seq.init_box = BoundingBox(std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]),
                               std::stod(parts[3]));
  } catch (const std::exception&) {
    throw IngestionError(dir + ": unparseable init.txt");
  }
  if (!seq.init_box.valid()) throw IngestionError(dir + ": degenerate init box");

  if (std::ifstream gt(root / "groundtruth.txt"); gt) {
    std::vector<std::optional<BoundingBox>> boxes;
    size_t ln = 0;
    while (std::getline(gt, line)) {
      ++ln;
      line = seq_detail::trim(line);
      if (line.empty()) continue;
      boxes.push_back(seq_detail::parse_corner_line(
          line, dir + ": groundtruth.txt line " + std::to_string(ln)));
    }
    if (boxes.size() != seq.frames.size())
      throw IngestionError(dir + ": groundtruth has " + std::to_string(boxes.size()) +
                           " entries for " + std::to_string(seq.frames.size()) + " frames");
    if (boxes.front()) {
      const BoundingBox& b = *boxes.front();
      if (std::abs(b.x - seq.init_box.x) > 1.0 || std::abs(b.y - seq.init_box.y) > 1.0 ||
          std::abs(b.w - seq.init_box.w) > 1.0 || std::abs(b.h - seq.init_box.h) > 1.0)
        throw IngestionError(dir + ": init box disagrees with ground truth frame 1");
    }
    seq.ground_truth = std::move(boxes);
  }

  if (std::ifstream attrs(root / "attributes.txt"); attrs) {
    std::string all((std::istreambuf_iterator<char>(attrs)), std::istreambuf_iterator<char>());
    std::string token;
    for (char c : all + ",") {
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        token.push_back(c);
      } else if (!token.empty()) {
        if (!known_category_tags().count(token))
          throw IngestionError(dir + ": unknown category tag '" + token + "'");
        seq.category_tags.push_back(token);
        token.clear();
      }
    }
  }

  if (std::ifstream cov(root / "coverage.txt"); cov) {
    while (std::getline(cov, line)) {
      line = seq_detail::trim(line);
      if (!line.empty()) seq.coverage.push_back(std::stod(line));
    }
  }
  return seq;
}

inline Frame load_frame(const Sequence& seq, size_t i) {
  if (i >= seq.frames.size()) throw IngestionError(seq.name + ": frame index out of range");
  Rgb8Image rgb = load_rgb8(seq.frames[i].first);
  Gray16Image depth = load_gray16(seq.frames[i].second);
  if (rgb.width != depth.width || rgb.height != depth.height)
    throw IngestionError(seq.name + ": rgb and depth dimensions differ at frame " +
                         std::to_string(i + 1));
  Frame frame(rgb.width, rgb.height);
  frame.rgb = std::move(rgb.pixels);
  frame.depth = std::move(depth.pixels);
  frame.index = static_cast<int64_t>(i);
  return frame;
}

}  // namespace dmdcf
