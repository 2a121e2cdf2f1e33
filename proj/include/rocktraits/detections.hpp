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

#include <string>
#include <vector>

#include "rocktraits/mask.hpp"
#include "rocktraits/tiler.hpp"

namespace rocktraits {

// One detected instance in tile-local pixel coordinates. This is the
// boundary where any external detector's output enters the pipeline; the
// JSON schema it is parsed from is documented in docs/formats.md.
struct InstanceRecord {
  PixelBox bbox;      // tile-local pixels
  double score = 1.0; // confidence in [0, 1]
  Rle rle;            // mask over the full tile grid
};

struct TileDetections {
  Tile tile;
  std::vector<InstanceRecord> instances;
};

// Parses and validates one per-tile detection file. Validation enforces:
// the tile reference matches the grid; RLE sums match the tile size; every
// mask has >= 1 foreground pixel; bbox lies within tile bounds; mask
// foreground stays within bbox expanded by <= 1 px. Violations raise
// DataError naming the instance index. Instances with score below
// `score_floor` are dropped after validation.
TileDetections load_tile_detections(const std::string& path,
                                    const TileGrid& grid,
                                    double score_floor = 0.0);

// Writes a detection file in the documented schema (used by the synthetic
// oracle and by round-trip tests).
void save_tile_detections(const TileDetections& dets,
                          const std::string& path);

// Canonical file name for a tile's detections: det_{row}_{col}.json.
std::string detection_file_name(int grid_col, int grid_row);

// Loads detections for every tile of the grid from a directory; every tile
// must have a file (empty instance lists are fine). Returns tiles in
// row-major order.
std::vector<TileDetections> load_detection_dir(const std::string& dir,
                                               const TileGrid& grid,
                                               double score_floor = 0.0);

}  // namespace rocktraits
