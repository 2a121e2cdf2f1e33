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

#include <optional>
#include <utility>
#include <vector>

#include "rocktraits/mask.hpp"
#include "rocktraits/mask_ops.hpp"
#include "rocktraits/raster.hpp"

namespace rocktraits {

class RockRegistry;

// Slope in degrees from Horn's 8-neighbor weighted differences; `cell` is
// the ground distance per pixel in meters. Borders use clamped-edge
// replication; windows touching nodata propagate nodata (sentinel -9999
// when the DEM has none).
GeoRaster horn_slope(const GeoRaster& dem, double cell);

// Separable Gaussian convolution, kernel radius ceil(3*sigma), kernel sum
// normalized to 1, symmetric reflection at borders. Nodata samples pass
// through unchanged and are skipped in the averaging of their neighbors.
GeoRaster gaussian_smooth(const GeoRaster& raster, double sigma);

struct MorphParams {
  int open_radius = 5;
  int close_radius = 5;
};

// Scarp geometry in the raster's pixel frame. strike / cross_strike are
// unit vectors in world axes (x east, y north); cross_strike is strike
// rotated +90 degrees.
struct ScarpModel {
  Mask mask;
  std::vector<ContourPoint> contour;  // exterior boundary, ordered
  Mask skeleton;
  std::pair<double, double> strike{1.0, 0.0};
  std::pair<double, double> cross_strike{0.0, 1.0};
  // Centroid of the skeleton subsection the strike was fitted on (pixels).
  std::pair<double, double> strike_anchor_px{0.0, 0.0};
  GeoTransform transform;
};

// Threshold the slope map, clean it up (opening, closing, largest
// 8-connected component, hole filling) and trace the exterior contour.
// Returns nullopt when thresholding leaves no pixels (flat site).
std::optional<ScarpModel> extract_scarp(const GeoRaster& slope,
                                        double slope_threshold_deg,
                                        const MorphParams& morph = {});

// Total-least-squares line through the central `subsection` fraction (by
// arc length) of the skeleton's longest path. Returns (strike,
// cross_strike, anchor) where anchor is the subsection centroid in pixels.
// Throws DataError when fewer than 2 distinct points are available.
struct StrikeFit {
  std::pair<double, double> strike;
  std::pair<double, double> cross_strike;
  std::pair<double, double> anchor_px;
};
StrikeFit strike_line(const Mask& skeleton, double subsection,
                      const GeoTransform& gt);

// Convenience: slope -> smooth -> threshold/morphology -> skeleton ->
// strike, with the model's transform taken from the DEM.
struct ScarpParams {
  double gaussian_sigma_px = 5.0;
  double slope_threshold_deg = 15.0;
  MorphParams morph;
  double subsection = 0.5;
};
std::optional<ScarpModel> build_scarp_model(const GeoRaster& dem,
                                            const ScarpParams& params = {});

// Rocks whose mask centroid (nearest pixel) lies inside the scarp mask.
// Returns the kept ids in ascending order.
std::vector<int> filter_rocks(const RockRegistry& registry,
                              const ScarpModel& scarp);

}  // namespace rocktraits
