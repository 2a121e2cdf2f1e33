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

#include "rocktraits/scarp.hpp"
#include "rocktraits/shape.hpp"

namespace rocktraits {

// Uniform-bin histogram, half-open bins [lo, hi) with the last bin closed.
struct TraitHistogram {
  std::vector<double> bin_edges;       // bins + 1 edges
  std::vector<std::uint64_t> counts;   // per bin
  std::vector<double> normalized;      // fractions; empty when no samples
};

// Values outside the range are clamped into the end bins, so counts are
// conserved. Throws ConfigError unless hi > lo and bins >= 1.
TraitHistogram histogram(const std::vector<double>& values, int bins,
                         double lo, double hi);

// Angles are reduced mod 180 before binning over [0, 180).
TraitHistogram orientation_histogram(const std::vector<double>& degrees,
                                     int bins);

struct GridConfig {
  int n_areas = 16;   // spans along strike
  int n_boxes = 9;    // spans across strike
  int n_bins = 20;    // diameter bins per cell
  double bin_lo_m = 0.0;
  double bin_hi_m = 3.6;
};

// Along-strike / cross-strike partition of the scarp with one normalized
// major-axis-length histogram per cell.
struct CrossStrikeGrid {
  GridConfig config;
  // Projected coordinate frame: origin at the strike-fit anchor, axes along
  // strike / cross-strike (meters).
  double strike_min = 0.0, strike_max = 0.0;
  double cross_min = 0.0, cross_max = 0.0;
  bool degenerate_cross = false;  // single-box fallback was taken

  struct Cell {
    std::uint64_t count = 0;
    double mean_major_axis_m = 0.0;  // 0 when count == 0
    std::vector<double> normalized;  // n_bins fractions; empty when count 0
  };
  std::vector<Cell> cells;  // row-major: area * n_boxes + box
  std::uint64_t out_of_grid = 0;

  Cell& cell(int area, int box) {
    return cells[static_cast<std::size_t>(area) * config.n_boxes + box];
  }
  const Cell& cell(int area, int box) const {
    return cells[static_cast<std::size_t>(area) * config.n_boxes + box];
  }
};

// Projects each rock centroid onto (strike, cross_strike) anchored at the
// scarp's strike-fit anchor; the grid extent is the scarp mask's own
// projected extent, split into equal spans. Rocks projecting outside the
// extent land in the out_of_grid tally. Cells are filled in ascending rock
// id order, so the result is independent of input permutation.
CrossStrikeGrid build_grid(const std::vector<RockTraits>& rocks,
                           const ScarpModel& scarp,
                           const GridConfig& config = {});

// GeoJSON FeatureCollection: one polygon per rock (exterior contour in
// world coordinates) with properties id, area_m2, major_axis_m,
// minor_axis_m, eccentricity, orientation_deg, score.
std::string rocks_geojson(const std::vector<RockTraits>& rocks,
                          const GeoTransform& gt);

// CSV products (schemas in docs/formats.md).
std::string histogram_csv(const TraitHistogram& hist,
                          const std::string& unit_label);
std::string grid_cells_csv(const CrossStrikeGrid& grid);
std::string grid_bins_csv(const CrossStrikeGrid& grid);
std::string rocks_csv(const std::vector<RockTraits>& rocks);

}  // namespace rocktraits
