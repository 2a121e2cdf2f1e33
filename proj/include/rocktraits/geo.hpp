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

namespace rocktraits {

// Fractional pixel position; (0, 0) is the center coordinate frame of the
// upper-left pixel's corner (i.e. pixel (c, r) spans [c, c+1) x [r, r+1)).
struct PixelPoint {
  double col = 0.0;
  double row = 0.0;
};

// Planar world position in meters (projected CRS such as UTM).
struct WorldPoint {
  double x = 0.0;
  double y = 0.0;
};

// North-up affine mapping between pixel and world coordinates.
// origin_* is the world position of the upper-left corner of pixel (0, 0).
// World Y decreases as pixel row increases.
struct GeoTransform {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double res_x = 1.0;  // meters per pixel, > 0
  double res_y = 1.0;  // meters per pixel, > 0

  bool operator==(const GeoTransform&) const = default;
};

inline WorldPoint pixel_to_world(const GeoTransform& gt, PixelPoint p) {
  return {gt.origin_x + p.col * gt.res_x, gt.origin_y - p.row * gt.res_y};
}

inline PixelPoint world_to_pixel(const GeoTransform& gt, WorldPoint w) {
  return {(w.x - gt.origin_x) / gt.res_x, (gt.origin_y - w.y) / gt.res_y};
}

}  // namespace rocktraits
