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

#include "rocktraits/tiler.hpp"

#include <string>

#include "rocktraits/errors.hpp"

namespace rocktraits {

namespace {

std::vector<int> axis_origins(int dim, int tile_size, int overlap) {
  if (dim <= tile_size) return {0};
  int stride = tile_size - overlap;
  int count = (dim - overlap + stride - 1) / stride;  // ceil
  std::vector<int> origins(count);
  for (int k = 0; k < count; ++k) origins[k] = k * stride;
  origins[count - 1] = dim - tile_size;
  return origins;
}

}  // namespace

TileGrid plan_tiles(int width, int height, int tile_size, int overlap) {
  if (width < 1 || height < 1) {
    throw ConfigError("raster dimensions must be >= 1");
  }
  if (overlap < 0 || tile_size <= 2 * overlap) {
    throw ConfigError("tile_size must exceed twice the overlap (got tile=" +
                      std::to_string(tile_size) + ", overlap=" +
                      std::to_string(overlap) + ")");
  }
  TileGrid grid;
  grid.raster_width = width;
  grid.raster_height = height;
  grid.tile_size = tile_size;
  grid.overlap = overlap;
  grid.x_origins = axis_origins(width, tile_size, overlap);
  grid.y_origins = axis_origins(height, tile_size, overlap);
  grid.cols = static_cast<int>(grid.x_origins.size());
  grid.rows = static_cast<int>(grid.y_origins.size());
  return grid;
}

Tile TileGrid::tile(int col, int row) const {
  if (!valid_index(col, row)) {
    throw ConfigError("tile index (" + std::to_string(col) + ", " +
                      std::to_string(row) + ") outside grid");
  }
  Tile t;
  t.grid_col = col;
  t.grid_row = row;
  t.x0 = x_origins[col];
  t.y0 = y_origins[row];
  t.w = std::min(tile_size, raster_width);
  t.h = std::min(tile_size, raster_height);
  return t;
}

GeoRaster extract_tile(const GeoRaster& raster, const Tile& tile) {
  if (tile.x0 < 0 || tile.y0 < 0 || tile.x0 + tile.w > raster.width ||
      tile.y0 + tile.h > raster.height || tile.w < 1 || tile.h < 1) {
    throw DataError("tile window exceeds raster bounds");
  }
  GeoTransform gt = raster.transform;
  gt.origin_x += tile.x0 * gt.res_x;
  gt.origin_y -= tile.y0 * gt.res_y;
  GeoRaster out =
      GeoRaster::create(tile.w, tile.h, raster.band_count(), raster.type, gt);
  out.nodata = raster.nodata;
  for (int b = 0; b < raster.band_count(); ++b) {
    for (int r = 0; r < tile.h; ++r) {
      const float* src = raster.bands[b].data() +
                         static_cast<std::size_t>(tile.y0 + r) * raster.width +
                         tile.x0;
      float* dst = out.bands[b].data() + static_cast<std::size_t>(r) * tile.w;
      std::copy(src, src + tile.w, dst);
    }
  }
  return out;
}

std::vector<PixelBox> edge_bands(const Tile& tile, const TileGrid& grid) {
  if (!grid.valid_index(tile.grid_col, tile.grid_row)) {
    throw ConfigError("tile does not belong to the grid");
  }
  std::vector<PixelBox> bands;
  const PixelBox window = tile.window();
  const int c = tile.grid_col;
  const int r = tile.grid_row;
  // Order: left, right, top, bottom.
  if (c > 0) bands.push_back(window.intersection(grid.tile(c - 1, r).window()));
  if (c + 1 < grid.cols) {
    bands.push_back(window.intersection(grid.tile(c + 1, r).window()));
  }
  if (r > 0) bands.push_back(window.intersection(grid.tile(c, r - 1).window()));
  if (r + 1 < grid.rows) {
    bands.push_back(window.intersection(grid.tile(c, r + 1).window()));
  }
  return bands;
}

}  // namespace rocktraits
