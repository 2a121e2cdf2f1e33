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

#include <vector>

#include "rocktraits/mask.hpp"
#include "rocktraits/raster.hpp"

namespace rocktraits {

// One window of the overlap split. (grid_col, grid_row) index the tile in
// its grid; (x0, y0) anchor it in parent-raster pixels.
struct Tile {
  int grid_col = 0;
  int grid_row = 0;
  int x0 = 0;
  int y0 = 0;
  int w = 0;
  int h = 0;

  PixelBox window() const { return {x0, y0, w, h}; }
  bool operator==(const Tile&) const = default;
};

// Overlap-split plan: full-size tiles on a stride of tile_size - overlap,
// with the last tile per axis pulled back to the raster edge. Rasters
// smaller than tile_size yield a single tile of the raster's own size.
struct TileGrid {
  int raster_width = 0;
  int raster_height = 0;
  int tile_size = 400;
  int overlap = 10;
  int cols = 0;
  int rows = 0;
  std::vector<int> x_origins;  // per grid column
  std::vector<int> y_origins;  // per grid row

  Tile tile(int col, int row) const;
  int tile_count() const { return cols * rows; }
  bool valid_index(int col, int row) const {
    return col >= 0 && col < cols && row >= 0 && row < rows;
  }
};

// Throws ConfigError unless tile_size > 2 * overlap and dimensions >= 1.
TileGrid plan_tiles(int width, int height, int tile_size = 400,
                    int overlap = 10);

// Copies a tile window into a standalone raster whose geotransform keeps
// shared pixels at identical world positions. Throws on out-of-bounds tiles.
GeoRaster extract_tile(const GeoRaster& raster, const Tile& tile);

// The (up to 4) rectangles this tile shares with its left/right/top/bottom
// neighbors, in parent-raster pixel coordinates. Grid-boundary sides yield
// no rectangle.
std::vector<PixelBox> edge_bands(const Tile& tile, const TileGrid& grid);

}  // namespace rocktraits
