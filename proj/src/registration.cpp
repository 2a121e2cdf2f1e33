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

#include "rocktraits/registration.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "rocktraits/errors.hpp"

namespace rocktraits {

PixelBox band_rect(const BandKey& key, const TileGrid& grid) {
  if (key.axis == 0) {
    return grid.tile(key.col, key.row)
        .window()
        .intersection(grid.tile(key.col + 1, key.row).window());
  }
  return grid.tile(key.col, key.row)
      .window()
      .intersection(grid.tile(key.col, key.row + 1).window());
}

std::vector<BandKey> bands_touched(const PixelBox& bbox,
                                   const TileGrid& grid) {
  std::vector<BandKey> keys;
  if (bbox.empty()) return keys;
  // Vertical bands between adjacent columns; the band's y extent is the
  // shared row window, so scan rows too. Grids are small (tens of tiles per
  // axis), so a direct scan is plenty.
  for (int c = 0; c + 1 < grid.cols; ++c) {
    long strip_x0 = grid.x_origins[c + 1];
    long strip_x1 = grid.x_origins[c] + std::min(grid.tile_size,
                                                 grid.raster_width);
    if (bbox.x >= strip_x1 || bbox.x + bbox.w <= strip_x0) continue;
    for (int r = 0; r < grid.rows; ++r) {
      BandKey key{0, c, r};
      if (bbox.intersects(band_rect(key, grid))) keys.push_back(key);
    }
  }
  for (int r = 0; r + 1 < grid.rows; ++r) {
    long strip_y0 = grid.y_origins[r + 1];
    long strip_y1 = grid.y_origins[r] + std::min(grid.tile_size,
                                                 grid.raster_height);
    if (bbox.y >= strip_y1 || bbox.y + bbox.h <= strip_y0) continue;
    for (int c = 0; c < grid.cols; ++c) {
      BandKey key{1, c, r};
      if (bbox.intersects(band_rect(key, grid))) keys.push_back(key);
    }
  }
  return keys;
}

int RockRegistry::add(RegisteredRock rock) {
  rock.id = next_id_++;
  int id = rock.id;
  rocks_.emplace(id, std::move(rock));
  index_bands(id);
  return id;
}

void RockRegistry::restore(RegisteredRock rock) {
  if (rock.id < 0 || rocks_.count(rock.id)) {
    throw DataError("registry restore with missing or duplicate id");
  }
  next_id_ = std::max(next_id_, rock.id + 1);
  int id = rock.id;
  rocks_.emplace(id, std::move(rock));
  index_bands(id);
}

void RockRegistry::index_bands(int id) {
  std::vector<BandKey> keys = bands_touched(rocks_.at(id).bbox, grid_);
  for (const BandKey& key : keys) {
    band_buckets_[key].push_back(id);
  }
  if (!keys.empty()) rock_bands_[id] = std::move(keys);
}

void RockRegistry::unindex_bands(int id) {
  auto it = rock_bands_.find(id);
  if (it == rock_bands_.end()) return;
  for (const BandKey& key : it->second) {
    auto& bucket = band_buckets_[key];
    bucket.erase(std::remove(bucket.begin(), bucket.end(), id), bucket.end());
  }
  rock_bands_.erase(it);
}

void RockRegistry::reindex(int id) {
  unindex_bands(id);
  index_bands(id);
}

std::vector<int> RockRegistry::band_candidates(
    const std::vector<BandKey>& keys) const {
  std::vector<int> ids;
  for (const BandKey& key : keys) {
    auto it = band_buckets_.find(key);
    if (it == band_buckets_.end()) continue;
    ids.insert(ids.end(), it->second.begin(), it->second.end());
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

void RockRegistry::merge_rocks(int keeper, int loser) {
  RegisteredRock& k = rocks_.at(keeper);
  const RegisteredRock& l = rocks_.at(loser);
  merge(k, l);
  unindex_bands(loser);
  rocks_.erase(loser);
  reindex(keeper);
  merge_events_ += 1;
}

RegisteredRock project_to_global(const Tile& tile, const InstanceRecord& inst,
                                 const TileGrid& grid) {
  RegisteredRock rock;
  rock.bbox = {inst.bbox.x + tile.x0, inst.bbox.y + tile.y0, inst.bbox.w,
               inst.bbox.h};
  Mask local = decode_rle(inst.rle);
  rock.mask = RegionMask::from_mask(local, tile.x0, tile.y0,
                                    grid.raster_width, grid.raster_height);
  rock.score = inst.score;
  rock.source_tiles.insert({tile.grid_col, tile.grid_row});
  return rock;
}

bool touches_edge_band(const RegisteredRock& rock, const Tile& tile,
                       const TileGrid& grid) {
  for (const PixelBox& band : edge_bands(tile, grid)) {
    if (rock.bbox.intersects(band)) return true;
  }
  return false;
}

namespace {

std::vector<BandKey> own_band_keys(const Tile& tile, const TileGrid& grid) {
  std::vector<BandKey> keys;
  const int c = tile.grid_col;
  const int r = tile.grid_row;
  if (c > 0) keys.push_back({0, c - 1, r});
  if (c + 1 < grid.cols) keys.push_back({0, c, r});
  if (r > 0) keys.push_back({1, c, r - 1});
  if (r + 1 < grid.rows) keys.push_back({1, c, r});
  return keys;
}

}  // namespace

std::optional<int> check_bbox_overlap(const RegisteredRock& rock,
                                      const Tile& tile,
                                      const RockRegistry& registry,
                                      int exclude) {
  std::vector<int> candidates =
      registry.band_candidates(own_band_keys(tile, registry.grid()));
  std::optional<int> best;
  std::uint64_t best_inter = 0;
  for (int id : candidates) {
    if (id == exclude) continue;
    const RegisteredRock& other = registry.rocks().at(id);
    if (!rock.bbox.intersects(other.bbox)) continue;
    std::uint64_t inter = check_mask_overlap(rock.mask, other.mask);
    // Largest intersection wins; candidates come in ascending id order, so
    // a strict > keeps the lowest id on ties.
    if (!best || inter > best_inter) {
      best = id;
      best_inter = inter;
    }
  }
  return best;
}

std::uint64_t check_mask_overlap(const RegionMask& a, const RegionMask& b) {
  return intersection_area(a, b);
}

void merge(RegisteredRock& target, const RegisteredRock& rock) {
  target.mask = union_of(target.mask, rock.mask);
  target.bbox = target.bbox.hull(rock.bbox);
  target.score = std::max(target.score, rock.score);
  target.source_tiles.insert(rock.source_tiles.begin(),
                             rock.source_tiles.end());
}

namespace {

double overlap_ratio(std::uint64_t inter, std::uint64_t area_a,
                     std::uint64_t area_b) {
  std::uint64_t smaller = std::min(area_a, area_b);
  if (smaller == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(smaller);
}

}  // namespace

RockRegistry register_all(const TileGrid& grid,
                          const std::vector<TileDetections>& detections,
                          double overlap_ratio_threshold) {
  if (!(overlap_ratio_threshold > 0.0 && overlap_ratio_threshold <= 1.0)) {
    throw ConfigError("overlap ratio threshold must lie in (0, 1]");
  }
  // Index detections by tile and require full grid coverage.
  std::map<std::pair<int, int>, const TileDetections*> by_tile;
  for (const TileDetections& d : detections) {
    if (!grid.valid_index(d.tile.grid_col, d.tile.grid_row)) {
      throw DataError("detections reference tile (" +
                      std::to_string(d.tile.grid_col) + ", " +
                      std::to_string(d.tile.grid_row) + ") outside the grid");
    }
    by_tile[{d.tile.grid_col, d.tile.grid_row}] = &d;
  }

  RockRegistry registry(grid);
  for (int row = 0; row < grid.rows; ++row) {
    for (int col = 0; col < grid.cols; ++col) {
      auto it = by_tile.find({col, row});
      if (it == by_tile.end()) continue;  // tile with no detections file
      const Tile tile = grid.tile(col, row);
      for (const InstanceRecord& inst : it->second->instances) {
        RegisteredRock rock = project_to_global(tile, inst, grid);
        if (!touches_edge_band(rock, tile, grid)) {
          registry.add(std::move(rock));
          continue;
        }
        std::optional<int> target = check_bbox_overlap(rock, tile, registry);
        bool merged = false;
        if (target) {
          const RegisteredRock& t = registry.rocks().at(*target);
          std::uint64_t inter = check_mask_overlap(rock.mask, t.mask);
          if (overlap_ratio(inter, rock.mask.area(), t.mask.area()) >=
              overlap_ratio_threshold) {
            merge(registry.rocks().at(*target), rock);
            registry.reindex(*target);
            registry.count_merge_event();
            merged = true;
            // Cascade: the grown rock may now satisfy the threshold against
            // another band candidate (rocks spanning 3+ tiles).
            int current = *target;
            for (;;) {
              const RegisteredRock& cur = registry.rocks().at(current);
              std::optional<int> next =
                  check_bbox_overlap(cur, tile, registry, current);
              if (!next) break;
              const RegisteredRock& other = registry.rocks().at(*next);
              std::uint64_t ci = check_mask_overlap(cur.mask, other.mask);
              if (overlap_ratio(ci, cur.mask.area(), other.mask.area()) <
                  overlap_ratio_threshold) {
                break;
              }
              int keeper = std::min(current, *next);
              int loser = std::max(current, *next);
              registry.merge_rocks(keeper, loser);
              current = keeper;
            }
          }
        }
        if (!merged) registry.add(std::move(rock));
      }
    }
  }
  return registry;
}

void save_registry(const RockRegistry& registry, const std::string& path) {
  nlohmann::json j;
  j["raster"] = {{"width", registry.grid().raster_width},
                 {"height", registry.grid().raster_height}};
  j["grid"] = {{"tile_size", registry.grid().tile_size},
               {"overlap", registry.grid().overlap},
               {"cols", registry.grid().cols},
               {"rows", registry.grid().rows}};
  j["merge_events"] = registry.merge_events();
  j["rocks"] = nlohmann::json::array();
  for (const auto& [id, rock] : registry.rocks()) {
    nlohmann::json jr;
    jr["id"] = id;
    jr["bbox"] = {rock.bbox.x, rock.bbox.y, rock.bbox.w, rock.bbox.h};
    jr["score"] = rock.score;
    jr["source_tiles"] = nlohmann::json::array();
    for (const auto& [c, r] : rock.source_tiles) {
      jr["source_tiles"].push_back({c, r});
    }
    Rle rle = rock.mask.to_rle();
    jr["rle"] = {{"size", {rle.height, rle.width}}, {"counts", rle.counts}};
    j["rocks"].push_back(std::move(jr));
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot open for write: " + path);
  out << j.dump() << '\n';
}

RockRegistry load_registry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open registry file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
  try {
    int width = j.at("raster").at("width").get<int>();
    int height = j.at("raster").at("height").get<int>();
    TileGrid grid = plan_tiles(width, height,
                               j.at("grid").at("tile_size").get<int>(),
                               j.at("grid").at("overlap").get<int>());
    RockRegistry registry(grid);
    for (const auto& jr : j.at("rocks")) {
      RegisteredRock rock;
      rock.id = jr.at("id").get<int>();
      const auto& bbox = jr.at("bbox");
      rock.bbox = {bbox.at(0).get<long>(), bbox.at(1).get<long>(),
                   bbox.at(2).get<long>(), bbox.at(3).get<long>()};
      rock.score = jr.at("score").get<double>();
      for (const auto& st : jr.at("source_tiles")) {
        rock.source_tiles.insert({st.at(0).get<int>(), st.at(1).get<int>()});
      }
      Rle rle;
      rle.height = jr.at("rle").at("size").at(0).get<int>();
      rle.width = jr.at("rle").at("size").at(1).get<int>();
      rle.counts =
          jr.at("rle").at("counts").get<std::vector<std::uint64_t>>();
      rock.mask = RegionMask::from_rle(rle);
      registry.restore(std::move(rock));
    }
    return registry;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": schema violation: " + e.what());
  }
}

}  // namespace rocktraits
