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

#include "rocktraits/mask.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "rocktraits/errors.hpp"

namespace rocktraits {

std::uint64_t Mask::area() const {
  std::uint64_t n = 0;
  for (std::uint8_t v : data) n += v ? 1 : 0;
  return n;
}

Mask decode_rle(const std::vector<std::uint64_t>& counts, int height,
                int width) {
  const std::uint64_t total =
      static_cast<std::uint64_t>(height) * static_cast<std::uint64_t>(width);
  std::uint64_t sum = 0;
  for (std::uint64_t c : counts) sum += c;
  if (sum != total) {
    throw DataError("rle count sum " + std::to_string(sum) +
                    " does not match mask size " + std::to_string(total));
  }
  Mask mask(width, height);
  std::uint64_t pos = 0;
  bool fg = false;
  for (std::uint64_t c : counts) {
    if (fg) {
      std::fill(mask.data.begin() + pos, mask.data.begin() + pos + c, 1);
    }
    pos += c;
    fg = !fg;
  }
  return mask;
}

Rle encode_rle(const Mask& mask) {
  Rle rle;
  rle.height = mask.height;
  rle.width = mask.width;
  const std::uint64_t total = static_cast<std::uint64_t>(mask.data.size());
  std::uint64_t pos = 0;
  bool fg = false;
  while (pos < total) {
    std::uint64_t start = pos;
    while (pos < total && (mask.data[pos] != 0) == fg) ++pos;
    rle.counts.push_back(pos - start);
    fg = !fg;
  }
  if (rle.counts.empty()) rle.counts.push_back(0);
  return rle;
}

PixelBox PixelBox::intersection(const PixelBox& o) const {
  long x0 = std::max(x, o.x);
  long y0 = std::max(y, o.y);
  long x1 = std::min(x + w, o.x + o.w);
  long y1 = std::min(y + h, o.y + o.h);
  if (x1 <= x0 || y1 <= y0) return {};
  return {x0, y0, x1 - x0, y1 - y0};
}

PixelBox PixelBox::hull(const PixelBox& o) const {
  if (empty()) return o;
  if (o.empty()) return *this;
  long x0 = std::min(x, o.x);
  long y0 = std::min(y, o.y);
  long x1 = std::max(x + w, o.x + o.w);
  long y1 = std::max(y + h, o.y + o.h);
  return {x0, y0, x1 - x0, y1 - y0};
}

std::uint64_t RegionMask::area() const {
  std::uint64_t n = 0;
  for (const auto& [s, e] : runs) n += e - s;
  return n;
}

PixelBox RegionMask::bbox() const {
  if (runs.empty()) return {};
  const std::uint64_t w = static_cast<std::uint64_t>(grid_width);
  long min_c = grid_width, max_c = -1;
  long min_r = grid_height, max_r = -1;
  for (const auto& [s, e] : runs) {
    long r0 = static_cast<long>(s / w);
    long r1 = static_cast<long>((e - 1) / w);
    min_r = std::min(min_r, r0);
    max_r = std::max(max_r, r1);
    if (r0 == r1) {
      min_c = std::min(min_c, static_cast<long>(s % w));
      max_c = std::max(max_c, static_cast<long>((e - 1) % w));
    } else {
      // Run wraps across rows: middle rows are full width.
      min_c = 0;
      max_c = grid_width - 1;
    }
  }
  return {min_c, min_r, max_c - min_c + 1, max_r - min_r + 1};
}

std::pair<double, double> RegionMask::centroid() const {
  const std::uint64_t w = static_cast<std::uint64_t>(grid_width);
  double sum_c = 0.0, sum_r = 0.0, n = 0.0;
  for (auto [s, e] : runs) {
    while (s < e) {
      std::uint64_t row = s / w;
      std::uint64_t row_end = (row + 1) * w;
      std::uint64_t seg_end = std::min(e, row_end);
      double c0 = static_cast<double>(s % w);
      double cnt = static_cast<double>(seg_end - s);
      sum_c += cnt * (c0 + (cnt - 1.0) / 2.0);
      sum_r += cnt * static_cast<double>(row);
      n += cnt;
      s = seg_end;
    }
  }
  return {sum_c / n, sum_r / n};
}

bool RegionMask::contains(long col, long row) const {
  if (col < 0 || row < 0 || col >= grid_width || row >= grid_height) {
    return false;
  }
  std::uint64_t idx = static_cast<std::uint64_t>(row) * grid_width + col;
  auto it = std::upper_bound(
      runs.begin(), runs.end(), idx,
      [](std::uint64_t v, const auto& run) { return v < run.first; });
  if (it == runs.begin()) return false;
  --it;
  return idx >= it->first && idx < it->second;
}

RegionMask RegionMask::from_mask(const Mask& mask, long offset_x,
                                 long offset_y, int grid_width,
                                 int grid_height) {
  RegionMask out;
  out.grid_width = grid_width;
  out.grid_height = grid_height;
  const std::uint64_t gw = static_cast<std::uint64_t>(grid_width);
  for (int r = 0; r < mask.height; ++r) {
    long gr = offset_y + r;
    if (gr < 0 || gr >= grid_height) continue;
    int c = 0;
    while (c < mask.width) {
      if (!mask.at(c, r)) {
        ++c;
        continue;
      }
      int c0 = c;
      while (c < mask.width && mask.at(c, r)) ++c;
      long gx0 = offset_x + c0;
      long gx1 = offset_x + c;  // exclusive
      gx0 = std::max(gx0, 0L);
      gx1 = std::min(gx1, static_cast<long>(grid_width));
      if (gx1 <= gx0) continue;
      std::uint64_t start = static_cast<std::uint64_t>(gr) * gw + gx0;
      std::uint64_t end = start + (gx1 - gx0);
      if (!out.runs.empty() && out.runs.back().second == start) {
        out.runs.back().second = end;
      } else {
        out.runs.emplace_back(start, end);
      }
    }
  }
  return out;
}

RegionMask RegionMask::from_rle(const Rle& rle) {
  const std::uint64_t total = static_cast<std::uint64_t>(rle.height) *
                              static_cast<std::uint64_t>(rle.width);
  std::uint64_t sum = 0;
  for (std::uint64_t c : rle.counts) sum += c;
  if (sum != total) {
    throw DataError("rle count sum does not match grid size");
  }
  RegionMask out;
  out.grid_width = rle.width;
  out.grid_height = rle.height;
  std::uint64_t pos = 0;
  bool fg = false;
  for (std::uint64_t c : rle.counts) {
    if (fg && c > 0) {
      if (!out.runs.empty() && out.runs.back().second == pos) {
        out.runs.back().second = pos + c;
      } else {
        out.runs.emplace_back(pos, pos + c);
      }
    }
    pos += c;
    fg = !fg;
  }
  return out;
}

Rle RegionMask::to_rle() const {
  Rle rle;
  rle.height = grid_height;
  rle.width = grid_width;
  const std::uint64_t total = static_cast<std::uint64_t>(grid_height) *
                              static_cast<std::uint64_t>(grid_width);
  std::uint64_t pos = 0;
  for (const auto& [s, e] : runs) {
    rle.counts.push_back(s - pos);  // background gap (may be 0 at start)
    rle.counts.push_back(e - s);
    pos = e;
  }
  if (pos < total || rle.counts.empty()) rle.counts.push_back(total - pos);
  return rle;
}

Mask RegionMask::to_mask(const PixelBox& box) const {
  Mask mask(static_cast<int>(box.w), static_cast<int>(box.h));
  const std::uint64_t gw = static_cast<std::uint64_t>(grid_width);
  for (auto [s, e] : runs) {
    while (s < e) {
      std::uint64_t row = s / gw;
      std::uint64_t row_end = (row + 1) * gw;
      std::uint64_t seg_end = std::min(e, row_end);
      long r = static_cast<long>(row) - box.y;
      if (r >= 0 && r < box.h) {
        long c0 = static_cast<long>(s % gw) - box.x;
        long c1 = c0 + static_cast<long>(seg_end - s);
        c0 = std::max(c0, 0L);
        c1 = std::min(c1, box.w);
        for (long c = c0; c < c1; ++c) {
          mask.set(static_cast<int>(c), static_cast<int>(r), true);
        }
      }
      s = seg_end;
    }
  }
  return mask;
}

std::uint64_t intersection_area(const RegionMask& a, const RegionMask& b) {
  std::uint64_t total = 0;
  std::size_t i = 0, j = 0;
  while (i < a.runs.size() && j < b.runs.size()) {
    const auto& [as, ae] = a.runs[i];
    const auto& [bs, be] = b.runs[j];
    std::uint64_t lo = std::max(as, bs);
    std::uint64_t hi = std::min(ae, be);
    if (hi > lo) total += hi - lo;
    if (ae < be) {
      ++i;
    } else {
      ++j;
    }
  }
  return total;
}

RegionMask union_of(const RegionMask& a, const RegionMask& b) {
  RegionMask out;
  out.grid_width = a.grid_width;
  out.grid_height = a.grid_height;
  std::size_t i = 0, j = 0;
  auto push = [&out](std::uint64_t s, std::uint64_t e) {
    if (!out.runs.empty() && s <= out.runs.back().second) {
      out.runs.back().second = std::max(out.runs.back().second, e);
    } else {
      out.runs.emplace_back(s, e);
    }
  };
  while (i < a.runs.size() || j < b.runs.size()) {
    bool take_a = j >= b.runs.size() ||
                  (i < a.runs.size() && a.runs[i].first <= b.runs[j].first);
    if (take_a) {
      push(a.runs[i].first, a.runs[i].second);
      ++i;
    } else {
      push(b.runs[j].first, b.runs[j].second);
      ++j;
    }
  }
  return out;
}

double iou(const RegionMask& a, const RegionMask& b) {
  std::uint64_t inter = intersection_area(a, b);
  std::uint64_t uni = a.area() + b.area() - inter;
  if (uni == 0) throw DataError("iou of two empty masks is undefined");
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double iou(const PixelBox& a, const PixelBox& b) {
  long inter = a.intersection(b).area();
  long uni = a.area() + b.area() - inter;
  if (uni == 0) throw DataError("iou of two empty boxes is undefined");
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace rocktraits
