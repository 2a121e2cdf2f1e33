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

#include "rocktraits/stats.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "rocktraits/errors.hpp"
#include "rocktraits/util.hpp"

namespace rocktraits {

namespace {

int bin_of(double v, double lo, double hi, int bins) {
  if (v < lo) return 0;
  if (v >= hi) return bins - 1;
  int idx = static_cast<int>((v - lo) / (hi - lo) * bins);
  return std::clamp(idx, 0, bins - 1);
}

}  // namespace

TraitHistogram histogram(const std::vector<double>& values, int bins,
                         double lo, double hi) {
  if (bins < 1) throw ConfigError("histogram needs at least one bin");
  if (!(hi > lo)) throw ConfigError("histogram range must have hi > lo");
  TraitHistogram h;
  h.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) {
    h.bin_edges[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  }
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    h.counts[static_cast<std::size_t>(bin_of(v, lo, hi, bins))] += 1;
  }
  if (!values.empty()) {
    h.normalized.resize(h.counts.size());
    double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      h.normalized[i] = static_cast<double>(h.counts[i]) / n;
    }
  }
  return h;
}

TraitHistogram orientation_histogram(const std::vector<double>& degrees,
                                     int bins) {
  std::vector<double> reduced;
  reduced.reserve(degrees.size());
  for (double d : degrees) {
    double m = std::fmod(d, 180.0);
    if (m < 0.0) m += 180.0;
    reduced.push_back(m);
  }
  return histogram(reduced, bins, 0.0, 180.0);
}

CrossStrikeGrid build_grid(const std::vector<RockTraits>& rocks,
                           const ScarpModel& scarp,
                           const GridConfig& config) {
  if (config.n_areas < 1 || config.n_boxes < 1 || config.n_bins < 1) {
    throw ConfigError("grid dimensions must be >= 1");
  }
  if (!(config.bin_hi_m > config.bin_lo_m)) {
    throw ConfigError("grid bin range must have hi > lo");
  }
  if (rocks.empty()) {
    throw DataError("grid statistics need at least one rock");
  }

  const GeoTransform& gt = scarp.transform;
  WorldPoint anchor = pixel_to_world(gt, {scarp.strike_anchor_px.first + 0.5,
                                          scarp.strike_anchor_px.second + 0.5});
  auto project = [&](const WorldPoint& p) {
    double dx = p.x - anchor.x;
    double dy = p.y - anchor.y;
    return std::pair<double, double>{
        dx * scarp.strike.first + dy * scarp.strike.second,
        dx * scarp.cross_strike.first + dy * scarp.cross_strike.second};
  };

  CrossStrikeGrid grid;
  grid.config = config;

  // Grid extent: the scarp mask's own projected footprint.
  bool first = true;
  for (int r = 0; r < scarp.mask.height; ++r) {
    for (int c = 0; c < scarp.mask.width; ++c) {
      if (!scarp.mask.at(c, r)) continue;
      auto [s, x] = project(pixel_to_world(gt, {c + 0.5, r + 0.5}));
      if (first) {
        grid.strike_min = grid.strike_max = s;
        grid.cross_min = grid.cross_max = x;
        first = false;
      } else {
        grid.strike_min = std::min(grid.strike_min, s);
        grid.strike_max = std::max(grid.strike_max, s);
        grid.cross_min = std::min(grid.cross_min, x);
        grid.cross_max = std::max(grid.cross_max, x);
      }
    }
  }
  if (first) throw DataError("scarp mask is empty; cannot build grid");

  double strike_span = grid.strike_max - grid.strike_min;
  double cross_span = grid.cross_max - grid.cross_min;
  if (!(strike_span > 0.0)) {
    throw DataError("scarp footprint is degenerate along strike");
  }
  int n_boxes = config.n_boxes;
  if (!(cross_span > 0.0)) {
    grid.degenerate_cross = true;
    n_boxes = 1;
  }

  grid.cells.assign(
      static_cast<std::size_t>(config.n_areas) * config.n_boxes, {});

  // Deterministic cell accumulation: rocks in ascending id order.
  std::vector<const RockTraits*> ordered;
  ordered.reserve(rocks.size());
  for (const RockTraits& r : rocks) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(),
            [](const RockTraits* a, const RockTraits* b) {
              return a->id < b->id;
            });

  std::vector<std::vector<std::uint64_t>> bin_counts(
      grid.cells.size(),
      std::vector<std::uint64_t>(static_cast<std::size_t>(config.n_bins), 0));
  std::vector<double> len_sums(grid.cells.size(), 0.0);

  for (const RockTraits* rock : ordered) {
    auto [s, x] = project(rock->centroid_world);
    if (s < grid.strike_min || s > grid.strike_max ||
        (!grid.degenerate_cross && (x < grid.cross_min || x > grid.cross_max))) {
      grid.out_of_grid += 1;
      continue;
    }
    int area = bin_of(s, grid.strike_min, grid.strike_max, config.n_areas);
    int box = grid.degenerate_cross
                  ? 0
                  : bin_of(x, grid.cross_min, grid.cross_max, n_boxes);
    std::size_t ci =
        static_cast<std::size_t>(area) * config.n_boxes + box;
    grid.cells[ci].count += 1;
    len_sums[ci] += rock->major_axis_m;
    int bin = bin_of(rock->major_axis_m, config.bin_lo_m, config.bin_hi_m,
                     config.n_bins);
    bin_counts[ci][static_cast<std::size_t>(bin)] += 1;
  }

  for (std::size_t ci = 0; ci < grid.cells.size(); ++ci) {
    CrossStrikeGrid::Cell& cell = grid.cells[ci];
    if (cell.count == 0) continue;
    cell.mean_major_axis_m = len_sums[ci] / static_cast<double>(cell.count);
    cell.normalized.resize(static_cast<std::size_t>(config.n_bins));
    for (int b = 0; b < config.n_bins; ++b) {
      cell.normalized[static_cast<std::size_t>(b)] =
          static_cast<double>(bin_counts[ci][static_cast<std::size_t>(b)]) /
          static_cast<double>(cell.count);
    }
  }
  return grid;
}

std::string rocks_geojson(const std::vector<RockTraits>& rocks,
                          const GeoTransform& gt) {
  nlohmann::json fc;
  fc["type"] = "FeatureCollection";
  fc["features"] = nlohmann::json::array();
  for (const RockTraits& rock : rocks) {
    nlohmann::json feature;
    feature["type"] = "Feature";
    nlohmann::json ring = nlohmann::json::array();
    for (const ContourPoint& p : rock.exterior_contour) {
      WorldPoint w = pixel_to_world(gt, {p.col + 0.5, p.row + 0.5});
      ring.push_back({w.x, w.y});
    }
    if (!rock.exterior_contour.empty()) {
      const ContourPoint& p = rock.exterior_contour.front();
      WorldPoint w = pixel_to_world(gt, {p.col + 0.5, p.row + 0.5});
      ring.push_back({w.x, w.y});  // close the ring
    }
    feature["geometry"] = {{"type", "Polygon"},
                           {"coordinates", nlohmann::json::array({ring})}};
    feature["properties"] = {{"id", rock.id},
                             {"area_m2", rock.area_m2},
                             {"major_axis_m", rock.major_axis_m},
                             {"minor_axis_m", rock.minor_axis_m},
                             {"eccentricity", rock.eccentricity},
                             {"orientation_deg", rock.orientation_deg},
                             {"score", rock.score}};
    fc["features"].push_back(std::move(feature));
  }
  return fc.dump() + "\n";
}

std::string histogram_csv(const TraitHistogram& hist,
                          const std::string& unit_label) {
  std::string csv = "bin_lo_" + unit_label + ",bin_hi_" + unit_label +
                    ",count,fraction\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    csv += format_double(hist.bin_edges[i]) + "," +
           format_double(hist.bin_edges[i + 1]) + "," +
           std::to_string(hist.counts[i]) + ",";
    csv += hist.normalized.empty() ? "0" : format_double(hist.normalized[i]);
    csv += "\n";
  }
  return csv;
}

std::string grid_cells_csv(const CrossStrikeGrid& grid) {
  std::string csv =
      "area_index,box_index,rock_count,mean_major_axis_m\n";
  for (int a = 0; a < grid.config.n_areas; ++a) {
    for (int b = 0; b < grid.config.n_boxes; ++b) {
      const auto& cell = grid.cell(a, b);
      csv += std::to_string(a) + "," + std::to_string(b) + "," +
             std::to_string(cell.count) + "," +
             format_double(cell.mean_major_axis_m) + "\n";
    }
  }
  return csv;
}

std::string grid_bins_csv(const CrossStrikeGrid& grid) {
  std::string csv =
      "area_index,box_index,bin_index,bin_lo_m,bin_hi_m,fraction\n";
  const GridConfig& c = grid.config;
  for (int a = 0; a < c.n_areas; ++a) {
    for (int b = 0; b < c.n_boxes; ++b) {
      const auto& cell = grid.cell(a, b);
      for (int k = 0; k < c.n_bins; ++k) {
        double lo = c.bin_lo_m + (c.bin_hi_m - c.bin_lo_m) * k / c.n_bins;
        double hi =
            c.bin_lo_m + (c.bin_hi_m - c.bin_lo_m) * (k + 1) / c.n_bins;
        double frac = cell.normalized.empty()
                          ? 0.0
                          : cell.normalized[static_cast<std::size_t>(k)];
        csv += std::to_string(a) + "," + std::to_string(b) + "," +
               std::to_string(k) + "," + format_double(lo) + "," +
               format_double(hi) + "," + format_double(frac) + "\n";
      }
    }
  }
  return csv;
}

std::string rocks_csv(const std::vector<RockTraits>& rocks) {
  std::string csv =
      "id,centroid_x_m,centroid_y_m,area_m2,major_axis_m,minor_axis_m,"
      "eccentricity,orientation_deg,orientation_azimuth_deg,score\n";
  for (const RockTraits& r : rocks) {
    csv += std::to_string(r.id) + "," + format_double(r.centroid_world.x) +
           "," + format_double(r.centroid_world.y) + "," +
           format_double(r.area_m2) + "," + format_double(r.major_axis_m) +
           "," + format_double(r.minor_axis_m) + "," +
           format_double(r.eccentricity) + "," +
           format_double(r.orientation_deg) + "," +
           format_double(r.orientation_azimuth_deg) + "," +
           format_double(r.score) + "\n";
  }
  return csv;
}

}  // namespace rocktraits
