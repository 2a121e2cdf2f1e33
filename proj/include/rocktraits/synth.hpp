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
#include <string>
#include <vector>

#include "rocktraits/detections.hpp"
#include "rocktraits/mask.hpp"
#include "rocktraits/raster.hpp"
#include "rocktraits/tiler.hpp"

namespace rocktraits {

// Deterministic synthetic scarp scene: two flats joined by a planar ramp
// band, elliptical rocks with known traits. The test bed for the whole
// pipeline.
struct SceneSpec {
  int width = 1200;
  int height = 800;
  double res = 0.05;  // meters per pixel
  double origin_x = 383000.0;
  double origin_y = 4150000.0;
  std::uint64_t seed = 1;

  struct Scarp {
    double orientation_deg = 80.0;  // band direction, CCW from east
    double height_drop_m = 25.0;
    double band_width_m = 40.0;  // 0 selects flank_slope_deg instead
    double flank_slope_deg = 0.0;
    double noise_amp_m = 0.02;
    // Effective width: band_width_m when > 0, else drop / tan(slope).
    double effective_band_width() const;
  } scarp;

  struct Rocks {
    int count = 50;
    double diameter_median_m = 0.9;  // lognormal median of L
    double diameter_sigma = 0.5;     // lognormal sigma of ln L
    double diameter_min_m = 0.2;     // clip range of L
    double diameter_max_m = 3.6;
    double ecc_min = 0.5;
    double ecc_max = 0.9;
    double height_min_m = 0.2;
    double height_max_m = 1.0;
    int separation_px = 3;  // minimum Chebyshev gap between rocks
  } rocks;

  void validate() const;
};

SceneSpec load_scene_spec(const std::string& path);
std::string scene_spec_json(const SceneSpec& spec);

struct TruthRock {
  int index = 0;
  WorldPoint center;     // planted continuous center
  double a_m = 0.0;      // planted semimajor (L = 2a)
  double b_m = 0.0;
  double theta_deg = 0.0;  // CCW from east, [0, 180)
  double height_m = 0.0;
  bool on_scarp = false;
  RegionMask mask;  // rasterized, global pixel frame
};

struct GroundTruth {
  int width = 0;
  int height = 0;
  GeoTransform transform;
  double scarp_orientation_deg = 0.0;
  Mask scarp_mask;  // planted ramp band, rasterized
  std::vector<TruthRock> rocks;
};

struct Scene {
  GeoRaster dem;    // single band float32
  GeoRaster ortho;  // 3 band uint8
  GroundTruth truth;
};

// Identical seeds give bit-identical rasters and truth. Throws DataError
// when rock packing fails after bounded rejection attempts.
Scene generate_scene(const SceneSpec& spec);

// Clips every ground-truth mask to every tile it intersects, emitting
// score-1.0 instances; rocks crossing tile boundaries naturally split.
std::vector<TileDetections> oracle_detect(const GroundTruth& truth,
                                          const TileGrid& grid);

// Stress variant: masks dilated/eroded by a per-instance radius drawn from
// [-jitter, +jitter]; instances dropped i.i.d. with drop_rate. Instances
// eroded to nothing are dropped. Deterministic under seed.
std::vector<TileDetections> perturb_detections(
    const std::vector<TileDetections>& dets, int jitter, double drop_rate,
    std::uint64_t seed);

void save_truth(const GroundTruth& truth, const std::string& path);
GroundTruth load_truth(const std::string& path);

}  // namespace rocktraits
