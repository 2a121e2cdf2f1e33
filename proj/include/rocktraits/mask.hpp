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
#include <utility>
#include <vector>

namespace rocktraits {

// Dense binary mask, row-major, one byte per pixel (0 background,
// nonzero foreground).
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  Mask() = default;
  Mask(int w, int h)
      : width(w), height(h),
        data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0) {}

  bool at(int col, int row) const {
    return data[static_cast<std::size_t>(row) * width + col] != 0;
  }
  void set(int col, int row, bool v) {
    data[static_cast<std::size_t>(row) * width + col] = v ? 1 : 0;
  }
  bool in_bounds(int col, int row) const {
    return col >= 0 && col < width && row >= 0 && row < height;
  }
  std::uint64_t area() const;
};

// Run-length encoding over the row-major flattening of a grid. Counts
// alternate background run, foreground run, ..., starting with background
// (a leading 0 means the mask starts with foreground). Canonical form has
// no zero-length interior runs. sum(counts) == height * width.
struct Rle {
  int height = 0;
  int width = 0;
  std::vector<std::uint64_t> counts;
};

// counts -> dense mask. Throws DataError when sum(counts) != height * width.
Mask decode_rle(const std::vector<std::uint64_t>& counts, int height,
                int width);
inline Mask decode_rle(const Rle& rle) {
  return decode_rle(rle.counts, rle.height, rle.width);
}

// dense mask -> canonical counts.
Rle encode_rle(const Mask& mask);

// Integer pixel rectangle: columns [x, x+w), rows [y, y+h).
struct PixelBox {
  long x = 0;
  long y = 0;
  long w = 0;
  long h = 0;

  bool empty() const { return w <= 0 || h <= 0; }
  bool intersects(const PixelBox& o) const {
    return x < o.x + o.w && o.x < x + w && y < o.y + o.h && o.y < y + h;
  }
  PixelBox intersection(const PixelBox& o) const;
  PixelBox hull(const PixelBox& o) const;
  long area() const { return empty() ? 0 : w * h; }

  bool operator==(const PixelBox&) const = default;
};

// Sparse binary region over a (possibly very large) grid, stored as sorted
// disjoint foreground intervals of the row-major flattening. The compact
// complement of a dense Mask for global-frame rock masks.
struct RegionMask {
  int grid_width = 0;
  int grid_height = 0;
  // Half-open [start, end) intervals, sorted, non-adjacent (coalesced).
  std::vector<std::pair<std::uint64_t, std::uint64_t>> runs;

  std::uint64_t area() const;
  bool empty() const { return runs.empty(); }
  PixelBox bbox() const;
  // Centroid in fractional pixel coordinates (pixel centers at col+0.5 but
  // the 0.5 offsets cancel; this returns mean col / mean row of foreground
  // pixel indices). Requires non-empty.
  std::pair<double, double> centroid() const;

  bool contains(long col, long row) const;

  static RegionMask from_mask(const Mask& mask, long offset_x, long offset_y,
                              int grid_width, int grid_height);
  static RegionMask from_rle(const Rle& rle);
  Rle to_rle() const;
  // Dense crop of the region over `box` (box given in grid coordinates).
  Mask to_mask(const PixelBox& box) const;
};

std::uint64_t intersection_area(const RegionMask& a, const RegionMask& b);
RegionMask union_of(const RegionMask& a, const RegionMask& b);

// |a ∩ b| / |a ∪ b|. Throws DataError when both are empty.
double iou(const RegionMask& a, const RegionMask& b);
double iou(const PixelBox& a, const PixelBox& b);

}  // namespace rocktraits
