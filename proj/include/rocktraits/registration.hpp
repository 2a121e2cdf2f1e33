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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rocktraits/detections.hpp"
#include "rocktraits/mask.hpp"
#include "rocktraits/tiler.hpp"

namespace rocktraits {

// A rock in the parent raster's pixel frame; either a freshly projected
// candidate (id < 0) or a registered instance.
struct RegisteredRock {
  int id = -1;
  PixelBox bbox;     // global pixel coordinates
  RegionMask mask;   // global pixel coordinates
  double score = 0.0;
  std::set<std::pair<int, int>> source_tiles;  // (grid_col, grid_row)
};

// Identifies one overlap band between two edge-adjacent tiles:
// axis 0 = vertical band between grid columns (col, col+1) in row `row`,
// axis 1 = horizontal band between grid rows (row, row+1) in column `col`.
struct BandKey {
  int axis = 0;
  int col = 0;
  int row = 0;
  auto operator<=>(const BandKey&) const = default;
};

PixelBox band_rect(const BandKey& key, const TileGrid& grid);

// All overlap bands (anywhere in the grid) a global bbox touches.
std::vector<BandKey> bands_touched(const PixelBox& bbox, const TileGrid& grid);

// Registry of merged rocks plus a band index: rocks whose bbox touches a
// tile overlap band, bucketed by that band. Candidate lookups during
// registration only search these buckets, keeping the scan local.
class RockRegistry {
 public:
  explicit RockRegistry(const TileGrid& grid) : grid_(grid) {}

  const TileGrid& grid() const { return grid_; }
  const std::map<int, RegisteredRock>& rocks() const { return rocks_; }
  std::map<int, RegisteredRock>& rocks() { return rocks_; }
  std::uint64_t merge_events() const { return merge_events_; }
  std::size_t size() const { return rocks_.size(); }

  // Inserts a candidate as a new rock, assigns its id, and indexes its
  // bands. Returns the id.
  int add(RegisteredRock rock);

  // Inserts a rock keeping its existing id (registry round trips).
  void restore(RegisteredRock rock);

  // Rocks indexed under any of `keys`, deduplicated, ascending id.
  std::vector<int> band_candidates(const std::vector<BandKey>& keys) const;

  // Merges rock `loser` into rock `keeper` (mask union, bbox hull, max
  // score, union of source tiles), drops the loser and reindexes.
  void merge_rocks(int keeper, int loser);

  // Re-registers the (possibly grown) bbox of `id` in the band index.
  void reindex(int id);

  void count_merge_event() { merge_events_ += 1; }

 private:
  void index_bands(int id);
  void unindex_bands(int id);

  TileGrid grid_;
  std::map<int, RegisteredRock> rocks_;
  std::map<BandKey, std::vector<int>> band_buckets_;
  std::map<int, std::vector<BandKey>> rock_bands_;
  int next_id_ = 0;
  std::uint64_t merge_events_ = 0;
};

// Translates a tile-local instance into the parent raster's pixel frame.
RegisteredRock project_to_global(const Tile& tile, const InstanceRecord& inst,
                                 const TileGrid& grid);

// True iff the rock's global bbox intersects any of its own tile's overlap
// bands (grid-boundary sides have none).
bool touches_edge_band(const RegisteredRock& rock, const Tile& tile,
                       const TileGrid& grid);

// The registered band-indexed rock whose bbox intersects `rock`'s, searching
// only the overlap bands of rock's tile. Among several candidates the one
// with the largest mask intersection wins; ties break to the lowest id.
// `exclude` skips one id (used when re-checking a freshly merged rock).
std::optional<int> check_bbox_overlap(const RegisteredRock& rock,
                                      const Tile& tile,
                                      const RockRegistry& registry,
                                      int exclude = -1);

// Pixel count of the mask intersection.
std::uint64_t check_mask_overlap(const RegionMask& a, const RegionMask& b);

// Union-merge of `rock` into `target` (bbox hull, mask union, max score,
// source-tile union).
void merge(RegisteredRock& target, const RegisteredRock& rock);

// Algorithm: tiles in row-major order, instances in file order; an instance
// touching its tile's overlap bands is merged into the best band candidate
// when intersection / min(area) >= threshold, otherwise registered as new.
// After a merge the grown rock is re-checked against remaining band
// candidates so rocks spanning 3+ tiles collapse to one instance.
RockRegistry register_all(const TileGrid& grid,
                          const std::vector<TileDetections>& detections,
                          double overlap_ratio_threshold = 0.5);

// Registry file round trip (schema in docs/formats.md).
void save_registry(const RockRegistry& registry, const std::string& path);
RockRegistry load_registry(const std::string& path);

}  // namespace rocktraits
