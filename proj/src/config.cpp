// Copyright 2026 The rocktraits Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rocktraits/config.hpp"

#include <charconv>
#include <sstream>

#include "rocktraits/errors.hpp"
#include "rocktraits/util.hpp"

namespace rocktraits {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || p != value.data() + value.size()) {
    throw ConfigError("config key " + key + ": not a number: " + value);
  }
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  int v = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || p != value.data() + value.size()) {
    throw ConfigError("config key " + key + ": not an integer: " + value);
  }
  return v;
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  if (out.empty()) {
    throw ConfigError("config key " + key + ": empty list");
  }
  return out;
}

}  // namespace

PipelineConfig PipelineConfig::from_keys(
    const std::map<std::string, std::string>& keys) {
  PipelineConfig cfg;
  for (const auto& [key, value] : keys) {
    if (key == "paths.ortho") {
      cfg.ortho_path = value;
    } else if (key == "paths.dem") {
      cfg.dem_path = value;
    } else if (key == "paths.detections") {
      cfg.detections_dir = value;
    } else if (key == "paths.output") {
      cfg.output_dir = value;
    } else if (key == "tiling.tile_size") {
      cfg.tile_size = parse_int(key, value);
    } else if (key == "tiling.overlap") {
      cfg.overlap = parse_int(key, value);
    } else if (key == "encoding.mode") {
      if (value != "none" && value != "colormap" && value != "relative") {
        throw ConfigError("encoding.mode must be none, colormap or relative");
      }
      cfg.encoding_mode = value;
    } else if (key == "encoding.h_min") {
      cfg.h_min = parse_double(key, value);
    } else if (key == "encoding.h_max") {
      cfg.h_max = parse_double(key, value);
    } else if (key == "encoding.cmap") {
      cfg.cmap_path = value;
    } else if (key == "registration.threshold") {
      cfg.overlap_threshold = parse_double(key, value);
    } else if (key == "registration.score_floor") {
      cfg.score_floor = parse_double(key, value);
    } else if (key == "scarp.gaussian_sigma") {
      cfg.scarp.gaussian_sigma_px = parse_double(key, value);
    } else if (key == "scarp.slope_threshold") {
      cfg.scarp.slope_threshold_deg = parse_double(key, value);
    } else if (key == "scarp.open_radius") {
      cfg.scarp.morph.open_radius = parse_int(key, value);
    } else if (key == "scarp.close_radius") {
      cfg.scarp.morph.close_radius = parse_int(key, value);
    } else if (key == "scarp.subsection") {
      cfg.scarp.subsection = parse_double(key, value);
    } else if (key == "grid.n_areas") {
      cfg.grid.n_areas = parse_int(key, value);
    } else if (key == "grid.n_boxes") {
      cfg.grid.n_boxes = parse_int(key, value);
    } else if (key == "grid.n_bins") {
      cfg.grid.n_bins = parse_int(key, value);
    } else if (key == "grid.bin_lo") {
      cfg.grid.bin_lo_m = parse_double(key, value);
    } else if (key == "grid.bin_hi") {
      cfg.grid.bin_hi_m = parse_double(key, value);
    } else if (key == "eval.iou_thresholds") {
      cfg.eval.thresholds = parse_double_list(key, value);
    } else if (key == "eval.large_area") {
      cfg.eval.large_area_px = parse_double(key, value);
    } else if (key == "eval.max_detections") {
      cfg.eval.max_detections = parse_int(key, value);
    } else if (key == "threads") {
      cfg.threads = parse_int(key, value);
    } else {
      throw ConfigError("unknown config key: " + key);
    }
  }
  return cfg;
}

std::map<std::string, std::string> PipelineConfig::to_keys() const {
  std::map<std::string, std::string> keys;
  keys["paths.ortho"] = ortho_path;
  keys["paths.dem"] = dem_path;
  keys["paths.detections"] = detections_dir;
  keys["paths.output"] = output_dir;
  keys["tiling.tile_size"] = std::to_string(tile_size);
  keys["tiling.overlap"] = std::to_string(overlap);
  keys["encoding.mode"] = encoding_mode;
  keys["encoding.h_min"] = format_double(h_min);
  keys["encoding.h_max"] = format_double(h_max);
  keys["encoding.cmap"] = cmap_path;
  keys["registration.threshold"] = format_double(overlap_threshold);
  keys["registration.score_floor"] = format_double(score_floor);
  keys["scarp.gaussian_sigma"] = format_double(scarp.gaussian_sigma_px);
  keys["scarp.slope_threshold"] = format_double(scarp.slope_threshold_deg);
  keys["scarp.open_radius"] = std::to_string(scarp.morph.open_radius);
  keys["scarp.close_radius"] = std::to_string(scarp.morph.close_radius);
  keys["scarp.subsection"] = format_double(scarp.subsection);
  keys["grid.n_areas"] = std::to_string(grid.n_areas);
  keys["grid.n_boxes"] = std::to_string(grid.n_boxes);
  keys["grid.n_bins"] = std::to_string(grid.n_bins);
  keys["grid.bin_lo"] = format_double(grid.bin_lo_m);
  keys["grid.bin_hi"] = format_double(grid.bin_hi_m);
  {
    std::string list;
    for (double t : eval.thresholds) {
      if (!list.empty()) list += ",";
      list += format_double(t);
    }
    keys["eval.iou_thresholds"] = list;
  }
  keys["eval.large_area"] = format_double(eval.large_area_px);
  keys["eval.max_detections"] = std::to_string(eval.max_detections);
  keys["threads"] = std::to_string(threads);
  return keys;
}

PipelineConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> keys;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key");
    }
    if (keys.count(key)) {
      throw ConfigError("config key repeated: " + key);
    }
    keys[key] = value;
  }
  return PipelineConfig::from_keys(keys);
}

PipelineConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return parse_config_text(text);
}

}  // namespace rocktraits
