#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dmdcf/bench/synthetic.hpp"
#include "dmdcf/errors.hpp"
#include "dmdcf/tracker.hpp"

namespace dmdcf {

// Flat "key = value" files with '#' comments. Keys mirror TrackerConfig /
// SyntheticSpec fields; unknown keys are rejected.
namespace config_detail {

inline std::map<std::string, std::string> parse_kv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = seq_detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + " line " + std::to_string(ln) + ": expected key = value");
    const std::string key = seq_detail::trim(line.substr(0, eq));
    const std::string value = seq_detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(path + " line " + std::to_string(ln) + ": empty key or value");
    kv[key] = value;
  }
  return kv;
}

inline double to_double(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: " + v);
  }
}

inline long to_int(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const long n = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not an integer: " + v);
  }
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': not a boolean: " + v);
}

inline std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(to_double(key, seq_detail::trim(item)));
  return out;
}

}  // namespace config_detail

inline TrackerConfig parse_tracker_config(const std::string& path) {
  using namespace config_detail;
  TrackerConfig cfg;
  for (const auto& [key, v] : parse_kv(path)) {
    if (key == "psi") cfg.psi = to_double(key, v);
    else if (key == "theta") cfg.theta = to_double(key, v);
    else if (key == "gamma") cfg.gamma = to_double(key, v);
    else if (key == "lambda") cfg.lambda = to_double(key, v);
    else if (key == "padding") cfg.padding = to_double(key, v);
    else if (key == "cell_size") cfg.cell_size = static_cast<int>(to_int(key, v));
    else if (key == "template_longer_side") cfg.template_longer_side = static_cast<int>(to_int(key, v));
    else if (key == "output_sigma_divisor") cfg.output_sigma_divisor = to_double(key, v);
    else if (key == "scale_factors") cfg.scale_factors = to_list(key, v);
    else if (key == "scale_penalty") cfg.scale_penalty = to_double(key, v);
    else if (key == "sigma_min_mm") cfg.sigma_min_mm = to_double(key, v);
    else if (key == "use_depth_mask") cfg.use_depth_mask = to_bool(key, v);
    else if (key == "use_occlusion") cfg.use_occlusion = to_bool(key, v);
    else if (key == "warm_start") cfg.warm_start = to_bool(key, v);
    else if (key == "mask_fixed_threshold") cfg.mask_fixed_threshold = to_bool(key, v);
    else if (key == "omega") cfg.omega = to_double(key, v);
    else if (key == "response_drop") cfg.occlusion.response_drop = to_double(key, v);
    else if (key == "depth_support_min") cfg.occlusion.depth_support_min = to_double(key, v);
    else if (key == "tau") cfg.occlusion.tau = to_double(key, v);
    else if (key == "history_length") cfg.occlusion.history_length = static_cast<size_t>(to_int(key, v));
    else if (key == "admm_mu0") cfg.admm.mu0 = to_double(key, v);
    else if (key == "admm_beta") cfg.admm.beta = to_double(key, v);
    else if (key == "admm_iterations") cfg.admm.iterations = static_cast<int>(to_int(key, v));
    else if (key == "use_hog") cfg.features.use_hog = to_bool(key, v);
    else if (key == "use_cn") cfg.features.use_cn = to_bool(key, v);
    else if (key == "use_gray") cfg.features.use_gray = to_bool(key, v);
    else if (key == "cn_table") cfg.features.cn_table = ColorNamesTable::load(v);
    else throw ConfigError("unknown tracker config key: " + key);
  }
  return cfg;
}

inline SyntheticSpec parse_synthetic_spec(const std::string& path) {
  using namespace config_detail;
  SyntheticSpec spec;
  for (const auto& [key, v] : parse_kv(path)) {
    if (key == "name") spec.name = v;
    else if (key == "canvas_w") spec.canvas_w = static_cast<int>(to_int(key, v));
    else if (key == "canvas_h") spec.canvas_h = static_cast<int>(to_int(key, v));
    else if (key == "frames") spec.frames = static_cast<int>(to_int(key, v));
    else if (key == "seed") spec.seed = static_cast<uint64_t>(to_int(key, v));
    else if (key == "target_w") spec.target_w = to_double(key, v);
    else if (key == "target_h") spec.target_h = to_double(key, v);
    else if (key == "target_x") spec.target_x = to_double(key, v);
    else if (key == "target_y") spec.target_y = to_double(key, v);
    else if (key == "target_vx") spec.target_vx = to_double(key, v);
    else if (key == "target_vy") spec.target_vy = to_double(key, v);
    else if (key == "target_zoom") spec.target_zoom = to_double(key, v);
    else if (key == "target_depth") spec.target_depth = static_cast<uint16_t>(to_int(key, v));
    else if (key == "background_depth") spec.background_depth = static_cast<uint16_t>(to_int(key, v));
    else if (key == "occluder_enabled") spec.occluder_enabled = to_bool(key, v);
    else if (key == "occluder_depth") spec.occluder_depth = static_cast<uint16_t>(to_int(key, v));
    else if (key == "occlusion_start") spec.occlusion_start = static_cast<int>(to_int(key, v));
    else if (key == "occlusion_ramp") spec.occlusion_ramp = static_cast<int>(to_int(key, v));
    else if (key == "occlusion_hold") spec.occlusion_hold = static_cast<int>(to_int(key, v));
    else if (key == "occlusion_peak") spec.occlusion_peak = to_double(key, v);
    else if (key == "rgb_noise") spec.rgb_noise = to_double(key, v);
    else if (key == "depth_noise") spec.depth_noise = to_double(key, v);
    else if (key == "hole_rate") spec.hole_rate = to_double(key, v);
    else throw ConfigError("unknown synthetic spec key: " + key);
  }
  spec.validate();
  return spec;
}

}  // namespace dmdcf
