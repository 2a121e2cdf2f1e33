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

#include "rocktraits/geo.hpp"
#include "rocktraits/mask.hpp"
#include "rocktraits/mask_ops.hpp"
#include "rocktraits/registration.hpp"

namespace rocktraits {

// A mask reduced to the interior of its largest exterior contour: holes
// filled, smaller disjoint components dropped, genus 0.
struct RefinedMask {
  Mask mask;                            // bbox-local dense mask
  PixelBox box;                         // placement in the source frame
  std::vector<ContourPoint> exterior_contour;  // source-frame coordinates
  std::uint64_t pixel_area = 0;
};

// Traces all borders, keeps the contour enclosing the largest pixel area,
// fills its interior and drops everything else. Throws DataError on an
// empty mask.
RefinedMask refine_mask(const Mask& mask);
RefinedMask refine_mask(const RegionMask& mask);

// pixel_area * res^2.
double pixel_area_to_m2(std::uint64_t pixel_area, double res);

// Moment-equivalent ellipse: center at the mask centroid, axes from the
// eigenvalues of the central second-moment matrix (a = 2*sqrt(lambda1)),
// theta in [0, 180) counterclockwise from +x east in the world frame (the
// pixel-row axis points south, so the image-frame angle is negated).
struct EllipseFit {
  double center_col = 0.0;  // source-frame pixels
  double center_row = 0.0;
  double a = 0.0;  // semimajor, pixels
  double b = 0.0;  // semiminor, pixels
  double theta_deg = 0.0;
};

// Minimum pixel area for a stable fit; below it DegenerateShape is thrown.
inline constexpr std::uint64_t kMinFitArea = 5;

EllipseFit fit_ellipse(const RefinedMask& refined);

// Georeferenced per-rock traits.
struct RockTraits {
  int id = -1;
  double area_m2 = 0.0;
  double major_axis_m = 0.0;  // L = 2a * res
  double minor_axis_m = 0.0;
  double eccentricity = 0.0;  // sqrt(1 - b^2/a^2)
  double orientation_deg = 0.0;  // CCW from east, [0, 180)
  double orientation_azimuth_deg = 0.0;  // CW from north, [0, 180)
  WorldPoint centroid_world;
  double score = 0.0;
  std::vector<ContourPoint> exterior_contour;  // global pixels
};

// refine_mask + fit_ellipse + unit conversion. Requires square pixels.
RockTraits compute_traits(const RegisteredRock& rock, const GeoTransform& gt);

}  // namespace rocktraits
