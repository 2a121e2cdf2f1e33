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

#include "rocktraits/detections.hpp"

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "rocktraits/errors.hpp"

namespace rocktraits {

namespace {

using nlohmann::json;

PixelBox foreground_bbox(const Mask& mask) {
  long min_c = mask.width, max_c = -1, min_r = mask.height, max_r = -1;
  for (int r = 0; r < mask.height; ++r) {
    for (int c = 0; c < mask.width; ++c) {
      if (!mask.at(c, r)) continue;
      min_c = std::min<long>(min_c, c);
      max_c = std::max<long>(max_c, c);
      min_r = std::min<long>(min_r, r);
      max_r = std::max<long>(max_r, r);
    }
  }
  if (max_c < 0) return {};
  return {min_c, min_r, max_c - min_c + 1, max_r - min_r + 1};
}

void validate_instance(const InstanceRecord& inst, const Tile& tile,
                       const std::string& context) {
  if (inst.bbox.w < 1 || inst.bbox.h < 1 || inst.bbox.x < 0 ||
      inst.bbox.y < 0 || inst.bbox.x + inst.bbox.w > tile.w ||
      inst.bbox.y + inst.bbox.h > tile.h) {
    throw DataError(context + ": bbox exceeds tile bounds");
  }
  if (!(inst.score >= 0.0 && inst.score <= 1.0)) {
    throw DataError(context + ": score outside [0, 1]");
  }
  if (inst.rle.height != tile.h || inst.rle.width != tile.w) {
    throw DataError(context + ": rle size does not match tile size");
  }
  Mask mask = decode_rle(inst.rle);  // throws on count-sum mismatch
  PixelBox fg = foreground_bbox(mask);
  if (fg.empty()) {
    throw DataError(context + ": mask has no foreground pixels");
  }
  PixelBox expanded{inst.bbox.x - 1, inst.bbox.y - 1, inst.bbox.w + 2,
                    inst.bbox.h + 2};
  if (fg.x < expanded.x || fg.y < expanded.y ||
      fg.x + fg.w > expanded.x + expanded.w ||
      fg.y + fg.h > expanded.y + expanded.h) {
    throw DataError(context + ": mask foreground escapes bbox by more than 1 px");
  }
}

}  // namespace

TileDetections load_tile_detections(const std::string& path,
                                    const TileGrid& grid,
                                    double score_floor) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open detection file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }

  TileDetections out;
  try {
    const json& t = j.at("tile");
    int col = t.at("col").get<int>();
    int row = t.at("row").get<int>();
    if (!grid.valid_index(col, row)) {
      throw DataError(path + ": tile (" + std::to_string(col) + ", " +
                      std::to_string(row) + ") not in grid");
    }
    Tile tile = grid.tile(col, row);
    if (t.at("x0").get<int>() != tile.x0 || t.at("y0").get<int>() != tile.y0 ||
        t.at("w").get<int>() != tile.w || t.at("h").get<int>() != tile.h) {
      throw DataError(path + ": tile geometry does not match the grid plan");
    }
    out.tile = tile;

    const json& instances = j.at("instances");
    if (!instances.is_array()) {
      throw DataError(path + ": instances must be an array");
    }
    for (std::size_t i = 0; i < instances.size(); ++i) {
      const json& ji = instances[i];
      InstanceRecord inst;
      const json& bbox = ji.at("bbox");
      if (!bbox.is_array() || bbox.size() != 4) {
        throw DataError(path + ": instance " + std::to_string(i) +
                        ": bbox must be [x, y, w, h]");
      }
      inst.bbox = {bbox[0].get<long>(), bbox[1].get<long>(),
                   bbox[2].get<long>(), bbox[3].get<long>()};
      inst.score = ji.at("score").get<double>();
      const json& rle = ji.at("rle");
      const json& size = rle.at("size");
      inst.rle.height = size.at(0).get<int>();
      inst.rle.width = size.at(1).get<int>();
      inst.rle.counts = rle.at("counts").get<std::vector<std::uint64_t>>();
      validate_instance(inst, tile,
                        path + ": instance " + std::to_string(i));
      if (inst.score >= score_floor) {
        out.instances.push_back(std::move(inst));
      }
    }
  } catch (const json::exception& e) {
    throw DataError(path + ": schema violation: " + e.what());
  }
  return out;
}

void save_tile_detections(const TileDetections& dets,
                          const std::string& path) {
  json j;
  j["tile"] = {{"col", dets.tile.grid_col}, {"row", dets.tile.grid_row},
               {"x0", dets.tile.x0},        {"y0", dets.tile.y0},
               {"w", dets.tile.w},          {"h", dets.tile.h}};
  j["instances"] = json::array();
  for (const InstanceRecord& inst : dets.instances) {
    json ji;
    ji["bbox"] = {inst.bbox.x, inst.bbox.y, inst.bbox.w, inst.bbox.h};
    ji["score"] = inst.score;
    ji["rle"] = {{"size", {inst.rle.height, inst.rle.width}},
                 {"counts", inst.rle.counts}};
    j["instances"].push_back(std::move(ji));
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot open for write: " + path);
  out << j.dump() << '\n';
}

std::string detection_file_name(int grid_col, int grid_row) {
  return "det_" + std::to_string(grid_row) + "_" + std::to_string(grid_col) +
         ".json";
}

std::vector<TileDetections> load_detection_dir(const std::string& dir,
                                               const TileGrid& grid,
                                               double score_floor) {
  if (!std::filesystem::is_directory(dir)) {
    throw DataError("detection directory does not exist: " + dir);
  }
  std::vector<TileDetections> all;
  all.reserve(static_cast<std::size_t>(grid.tile_count()));
  for (int row = 0; row < grid.rows; ++row) {
    for (int col = 0; col < grid.cols; ++col) {
      std::filesystem::path p =
          std::filesystem::path(dir) / detection_file_name(col, row);
      if (!std::filesystem::exists(p)) {
        throw DataError("missing detection file for tile (" +
                        std::to_string(col) + ", " + std::to_string(row) +
                        "): " + p.string());
      }
      all.push_back(load_tile_detections(p.string(), grid, score_floor));
    }
  }
  return all;
}

}  // namespace rocktraits
