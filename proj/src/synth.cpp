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

#include "rocktraits/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "rocktraits/errors.hpp"
#include "rocktraits/mask_ops.hpp"
#include "rocktraits/rng.hpp"

namespace rocktraits {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr int kMaxPlacementAttempts = 1000;

}  // namespace

double SceneSpec::Scarp::effective_band_width() const {
  if (band_width_m > 0.0) return band_width_m;
  return height_drop_m / std::tan(flank_slope_deg * kDegToRad);
}

void SceneSpec::validate() const {
  if (width < 1 || height < 1) throw ConfigError("scene dimensions must be >= 1");
  if (!(res > 0.0)) throw ConfigError("scene resolution must be positive");
  if (!(scarp.height_drop_m > 0.0)) {
    throw ConfigError("scarp height drop must be positive");
  }
  if (scarp.band_width_m <= 0.0 &&
      !(scarp.flank_slope_deg > 0.0 && scarp.flank_slope_deg < 90.0)) {
    throw ConfigError(
        "scarp needs band_width_m > 0 or flank_slope_deg in (0, 90)");
  }
  if (rocks.count < 0) throw ConfigError("rock count must be >= 0");
  if (!(rocks.diameter_min_m > 0.0) ||
      !(rocks.diameter_max_m >= rocks.diameter_min_m)) {
    throw ConfigError("rock diameter clip range is invalid");
  }
  if (!(rocks.ecc_min >= 0.0 && rocks.ecc_max < 1.0 &&
        rocks.ecc_max >= rocks.ecc_min)) {
    throw ConfigError("rock eccentricity range must lie in [0, 1)");
  }
  if (!(rocks.height_min_m > 0.0 && rocks.height_max_m >= rocks.height_min_m)) {
    throw ConfigError("rock height range is invalid");
  }
}

namespace {

// Pixel-center rasterization of a rotated ellipse; returns a bbox-local
// mask and its placement. theta is CCW from east in world axes, so in
// pixel axes (row south) the rotation sign flips.
struct RasterEllipse {
  Mask mask;
  long x0 = 0;
  long y0 = 0;
};

RasterEllipse rasterize_ellipse(double cx_px, double cy_px, double a_px,
                                double b_px, double theta_deg, int raster_w,
                                int raster_h) {
  double reach = std::max(a_px, b_px) + 1.0;
  long x0 = std::max(0L, static_cast<long>(std::floor(cx_px - reach)));
  long y0 = std::max(0L, static_cast<long>(std::floor(cy_px - reach)));
  long x1 = std::min<long>(raster_w, static_cast<long>(std::ceil(cx_px + reach)) + 1);
  long y1 = std::min<long>(raster_h, static_cast<long>(std::ceil(cy_px + reach)) + 1);
  RasterEllipse out;
  out.x0 = x0;
  out.y0 = y0;
  if (x1 <= x0 || y1 <= y0) return out;
  out.mask = Mask(static_cast<int>(x1 - x0), static_cast<int>(y1 - y0));
  double ct = std::cos(theta_deg * kDegToRad);
  double st = std::sin(theta_deg * kDegToRad);
  for (long r = y0; r < y1; ++r) {
    for (long c = x0; c < x1; ++c) {
      double dx = (static_cast<double>(c) + 0.5) - cx_px;
      // Pixel rows grow south; flip to world-style y for the rotation.
      double dy = -((static_cast<double>(r) + 0.5) - cy_px);
      double u = dx * ct + dy * st;
      double v = -dx * st + dy * ct;
      double q = (u * u) / (a_px * a_px) + (v * v) / (b_px * b_px);
      if (q <= 1.0) {
        out.mask.set(static_cast<int>(c - x0), static_cast<int>(r - y0), true);
      }
    }
  }
  return out;
}

}  // namespace

Scene generate_scene(const SceneSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  GeoTransform gt{spec.origin_x, spec.origin_y, spec.res, spec.res};
  Scene scene;
  scene.dem =
      GeoRaster::create(spec.width, spec.height, 1, SampleType::Float32, gt);
  scene.ortho =
      GeoRaster::create(spec.width, spec.height, 3, SampleType::UInt8, gt);
  scene.truth.width = spec.width;
  scene.truth.height = spec.height;
  scene.truth.transform = gt;
  scene.truth.scarp_orientation_deg = spec.scarp.orientation_deg;
  scene.truth.scarp_mask = Mask(spec.width, spec.height);

  const double band_w = spec.scarp.effective_band_width();
  const double drop = spec.scarp.height_drop_m;
  const double phi = spec.scarp.orientation_deg * kDegToRad;
  // Cross-strike unit normal in world axes.
  const double nx = -std::sin(phi);
  const double ny = std::cos(phi);
  const WorldPoint center = pixel_to_world(
      gt, {spec.width / 2.0, spec.height / 2.0});
  const double base_h = 1200.0;

  // Smooth low-frequency noise: four seeded sinusoids.
  struct Wave {
    double kx, ky, phase, amp;
  };
  std::vector<Wave> waves;
  for (int i = 0; i < 4; ++i) {
    double wavelength = rng.uniform(15.0, 60.0);  // meters
    double dir = rng.uniform(0.0, 2.0 * std::numbers::pi);
    waves.push_back({std::cos(dir) / wavelength, std::sin(dir) / wavelength,
                     rng.uniform(0.0, 2.0 * std::numbers::pi),
                     spec.scarp.noise_amp_m});
  }

  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      WorldPoint p = pixel_to_world(gt, {c + 0.5, r + 0.5});
      double u = (p.x - center.x) * nx + (p.y - center.y) * ny;
      double h;
      if (u <= -band_w / 2.0) {
        h = base_h;
      } else if (u >= band_w / 2.0) {
        h = base_h - drop;
      } else {
        h = base_h - drop * (u + band_w / 2.0) / band_w;
        scene.truth.scarp_mask.set(c, r, true);
      }
      double noise = 0.0;
      for (const Wave& wv : waves) {
        noise += wv.amp * std::sin(2.0 * std::numbers::pi *
                                       (wv.kx * p.x + wv.ky * p.y) +
                                   wv.phase);
      }
      scene.dem.at(0, c, r) = static_cast<float>(h + noise);
      float shade = static_cast<float>(
          110 + static_cast<int>(rng.next_below(21)));
      scene.ortho.at(0, c, r) = shade;
      scene.ortho.at(1, c, r) = shade;
      scene.ortho.at(2, c, r) = shade;
    }
  }

  // Rock placement with rejection sampling against an occupancy bitmap.
  Mask occupancy(spec.width, spec.height);
  const int sep = std::max(0, spec.rocks.separation_px);
  for (int i = 0; i < spec.rocks.count; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed;
         ++attempt) {
      double diameter = spec.rocks.diameter_median_m *
                        std::exp(spec.rocks.diameter_sigma * rng.normal());
      diameter = std::clamp(diameter, spec.rocks.diameter_min_m,
                            spec.rocks.diameter_max_m);
      double a_m = diameter / 2.0;
      double ecc = rng.uniform(spec.rocks.ecc_min, spec.rocks.ecc_max);
      double b_m = a_m * std::sqrt(1.0 - ecc * ecc);
      double theta = rng.uniform(0.0, 180.0);
      double height = rng.uniform(spec.rocks.height_min_m,
                                  spec.rocks.height_max_m);
      double a_px = a_m / spec.res;
      double b_px = b_m / spec.res;
      double margin = a_px + sep + 2.0;
      if (2.0 * margin >= spec.width || 2.0 * margin >= spec.height) {
        continue;  // rock cannot fit this raster at all
      }
      double cx = rng.uniform(margin, spec.width - margin);
      double cy = rng.uniform(margin, spec.height - margin);

      RasterEllipse re = rasterize_ellipse(cx, cy, a_px, b_px, theta,
                                           spec.width, spec.height);
      if (re.mask.area() == 0) continue;
      Mask grown = sep > 0 ? dilate(re.mask, sep) : re.mask;
      bool collides = false;
      for (int rr = 0; rr < grown.height && !collides; ++rr) {
        for (int cc = 0; cc < grown.width; ++cc) {
          if (!grown.at(cc, rr)) continue;
          long gx = re.x0 + cc;
          long gy = re.y0 + rr;
          if (occupancy.in_bounds(static_cast<int>(gx),
                                  static_cast<int>(gy)) &&
              occupancy.at(static_cast<int>(gx), static_cast<int>(gy))) {
            collides = true;
            break;
          }
        }
      }
      if (collides) continue;

      // Commit the rock: occupancy, DEM dome, ortho tint, ground truth.
      for (int rr = 0; rr < re.mask.height; ++rr) {
        for (int cc = 0; cc < re.mask.width; ++cc) {
          if (!re.mask.at(cc, rr)) continue;
          int gx = static_cast<int>(re.x0 + cc);
          int gy = static_cast<int>(re.y0 + rr);
          occupancy.set(gx, gy, true);
        }
      }
      double ct = std::cos(theta * kDegToRad);
      double st = std::sin(theta * kDegToRad);
      float tint = static_cast<float>(170 + static_cast<int>(rng.next_below(70)));
      for (int rr = 0; rr < re.mask.height; ++rr) {
        for (int cc = 0; cc < re.mask.width; ++cc) {
          if (!re.mask.at(cc, rr)) continue;
          int gx = static_cast<int>(re.x0 + cc);
          int gy = static_cast<int>(re.y0 + rr);
          double dx = (gx + 0.5) - cx;
          double dy = -((gy + 0.5) - cy);
          double uu = dx * ct + dy * st;
          double vv = -dx * st + dy * ct;
          double q = (uu * uu) / (a_px * a_px) + (vv * vv) / (b_px * b_px);
          scene.dem.at(0, gx, gy) +=
              static_cast<float>(height * std::max(0.0, 1.0 - q));
          scene.ortho.at(0, gx, gy) = tint;
          scene.ortho.at(1, gx, gy) = tint;
          scene.ortho.at(2, gx, gy) = tint;
        }
      }

      TruthRock rock;
      rock.index = i;
      rock.center = pixel_to_world(gt, {cx, cy});
      rock.a_m = a_m;
      rock.b_m = b_m;
      rock.theta_deg = theta;
      rock.height_m = height;
      rock.mask = RegionMask::from_mask(re.mask, re.x0, re.y0, spec.width,
                                        spec.height);
      auto [mcx, mcy] = rock.mask.centroid();
      int pc = static_cast<int>(std::lround(mcx));
      int pr = static_cast<int>(std::lround(mcy));
      rock.on_scarp = scene.truth.scarp_mask.in_bounds(pc, pr) &&
                      scene.truth.scarp_mask.at(pc, pr);
      scene.truth.rocks.push_back(std::move(rock));
      placed = true;
    }
    if (!placed) {
      throw DataError("rock packing failed after " +
                      std::to_string(kMaxPlacementAttempts) +
                      " attempts; scene too crowded");
    }
  }
  return scene;
}

std::vector<TileDetections> oracle_detect(const GroundTruth& truth,
                                          const TileGrid& grid) {
  if (grid.raster_width != truth.width ||
      grid.raster_height != truth.height) {
    throw DataError("tile grid does not match the truth raster frame");
  }
  std::vector<PixelBox> rock_boxes;
  rock_boxes.reserve(truth.rocks.size());
  for (const TruthRock& rock : truth.rocks) {
    rock_boxes.push_back(rock.mask.bbox());
  }
  std::vector<TileDetections> out;
  for (int row = 0; row < grid.rows; ++row) {
    for (int col = 0; col < grid.cols; ++col) {
      TileDetections dets;
      dets.tile = grid.tile(col, row);
      PixelBox window = dets.tile.window();
      for (std::size_t i = 0; i < truth.rocks.size(); ++i) {
        if (!rock_boxes[i].intersects(window)) continue;
        Mask local = truth.rocks[i].mask.to_mask(window);
        if (local.area() == 0) continue;
        // Local foreground bbox.
        long min_c = local.width, max_c = -1, min_r = local.height,
             max_r = -1;
        for (int r = 0; r < local.height; ++r) {
          for (int c = 0; c < local.width; ++c) {
            if (!local.at(c, r)) continue;
            min_c = std::min<long>(min_c, c);
            max_c = std::max<long>(max_c, c);
            min_r = std::min<long>(min_r, r);
            max_r = std::max<long>(max_r, r);
          }
        }
        InstanceRecord inst;
        inst.bbox = {min_c, min_r, max_c - min_c + 1, max_r - min_r + 1};
        inst.score = 1.0;
        inst.rle = encode_rle(local);
        dets.instances.push_back(std::move(inst));
      }
      out.push_back(std::move(dets));
    }
  }
  return out;
}

std::vector<TileDetections> perturb_detections(
    const std::vector<TileDetections>& dets, int jitter, double drop_rate,
    std::uint64_t seed) {
  if (jitter < 0) throw ConfigError("jitter must be >= 0");
  if (!(drop_rate >= 0.0 && drop_rate < 1.0)) {
    throw ConfigError("drop rate must lie in [0, 1)");
  }
  Rng rng(seed);
  std::vector<TileDetections> out;
  out.reserve(dets.size());
  for (const TileDetections& tile_dets : dets) {
    TileDetections perturbed;
    perturbed.tile = tile_dets.tile;
    for (const InstanceRecord& inst : tile_dets.instances) {
      double drop_draw = rng.next_double();
      long radius =
          jitter > 0
              ? static_cast<long>(rng.next_below(2 * jitter + 1)) - jitter
              : 0;
      if (drop_draw < drop_rate) continue;
      Mask mask = decode_rle(inst.rle);
      if (radius > 0) {
        mask = dilate(mask, static_cast<int>(radius));
      } else if (radius < 0) {
        mask = erode(mask, static_cast<int>(-radius));
      }
      if (mask.area() == 0) continue;  // eroded away entirely
      long min_c = mask.width, max_c = -1, min_r = mask.height, max_r = -1;
      for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
          if (!mask.at(c, r)) continue;
          min_c = std::min<long>(min_c, c);
          max_c = std::max<long>(max_c, c);
          min_r = std::min<long>(min_r, r);
          max_r = std::max<long>(max_r, r);
        }
      }
      InstanceRecord copy;
      copy.bbox = {min_c, min_r, max_c - min_c + 1, max_r - min_r + 1};
      copy.score = inst.score;
      copy.rle = encode_rle(mask);
      perturbed.instances.push_back(std::move(copy));
    }
    out.push_back(std::move(perturbed));
  }
  return out;
}

namespace {

nlohmann::json rle_json(const Rle& rle) {
  return {{"size", {rle.height, rle.width}}, {"counts", rle.counts}};
}

Rle rle_from_json(const nlohmann::json& j) {
  Rle rle;
  rle.height = j.at("size").at(0).get<int>();
  rle.width = j.at("size").at(1).get<int>();
  rle.counts = j.at("counts").get<std::vector<std::uint64_t>>();
  return rle;
}

}  // namespace

SceneSpec load_scene_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scene spec: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
  SceneSpec spec;
  try {
    spec.width = j.at("width").get<int>();
    spec.height = j.at("height").get<int>();
    spec.res = j.at("res").get<double>();
    spec.origin_x = j.value("origin_x", spec.origin_x);
    spec.origin_y = j.value("origin_y", spec.origin_y);
    spec.seed = j.value("seed", spec.seed);
    if (j.contains("scarp")) {
      const auto& s = j["scarp"];
      spec.scarp.orientation_deg =
          s.value("orientation_deg", spec.scarp.orientation_deg);
      spec.scarp.height_drop_m =
          s.value("height_drop_m", spec.scarp.height_drop_m);
      if (s.contains("flank_slope_deg")) {
        spec.scarp.flank_slope_deg = s["flank_slope_deg"].get<double>();
        spec.scarp.band_width_m = 0.0;
      }
      if (s.contains("band_width_m")) {
        spec.scarp.band_width_m = s["band_width_m"].get<double>();
      }
      spec.scarp.noise_amp_m = s.value("noise_amp_m", spec.scarp.noise_amp_m);
    }
    if (j.contains("rocks")) {
      const auto& r = j["rocks"];
      spec.rocks.count = r.value("count", spec.rocks.count);
      spec.rocks.diameter_median_m =
          r.value("diameter_median_m", spec.rocks.diameter_median_m);
      spec.rocks.diameter_sigma =
          r.value("diameter_sigma", spec.rocks.diameter_sigma);
      spec.rocks.diameter_min_m =
          r.value("diameter_min_m", spec.rocks.diameter_min_m);
      spec.rocks.diameter_max_m =
          r.value("diameter_max_m", spec.rocks.diameter_max_m);
      spec.rocks.ecc_min = r.value("ecc_min", spec.rocks.ecc_min);
      spec.rocks.ecc_max = r.value("ecc_max", spec.rocks.ecc_max);
      spec.rocks.height_min_m = r.value("height_min_m", spec.rocks.height_min_m);
      spec.rocks.height_max_m = r.value("height_max_m", spec.rocks.height_max_m);
      spec.rocks.separation_px =
          r.value("separation_px", spec.rocks.separation_px);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": schema violation: " + e.what());
  }
  spec.validate();
  return spec;
}

std::string scene_spec_json(const SceneSpec& spec) {
  nlohmann::json j;
  j["width"] = spec.width;
  j["height"] = spec.height;
  j["res"] = spec.res;
  j["origin_x"] = spec.origin_x;
  j["origin_y"] = spec.origin_y;
  j["seed"] = spec.seed;
  j["scarp"] = {{"orientation_deg", spec.scarp.orientation_deg},
                {"height_drop_m", spec.scarp.height_drop_m},
                {"band_width_m", spec.scarp.band_width_m},
                {"flank_slope_deg", spec.scarp.flank_slope_deg},
                {"noise_amp_m", spec.scarp.noise_amp_m}};
  j["rocks"] = {{"count", spec.rocks.count},
                {"diameter_median_m", spec.rocks.diameter_median_m},
                {"diameter_sigma", spec.rocks.diameter_sigma},
                {"diameter_min_m", spec.rocks.diameter_min_m},
                {"diameter_max_m", spec.rocks.diameter_max_m},
                {"ecc_min", spec.rocks.ecc_min},
                {"ecc_max", spec.rocks.ecc_max},
                {"height_min_m", spec.rocks.height_min_m},
                {"height_max_m", spec.rocks.height_max_m},
                {"separation_px", spec.rocks.separation_px}};
  return j.dump(2) + "\n";
}

void save_truth(const GroundTruth& truth, const std::string& path) {
  nlohmann::json j;
  j["raster"] = {{"width", truth.width},
                 {"height", truth.height},
                 {"origin_x", truth.transform.origin_x},
                 {"origin_y", truth.transform.origin_y},
                 {"res_x", truth.transform.res_x},
                 {"res_y", truth.transform.res_y}};
  j["scarp"] = {{"orientation_deg", truth.scarp_orientation_deg},
                {"rle", rle_json(encode_rle(truth.scarp_mask))}};
  j["rocks"] = nlohmann::json::array();
  for (const TruthRock& rock : truth.rocks) {
    j["rocks"].push_back(
        {{"index", rock.index},
         {"center_world", {rock.center.x, rock.center.y}},
         {"a_m", rock.a_m},
         {"b_m", rock.b_m},
         {"major_axis_m", 2.0 * rock.a_m},
         {"eccentricity",
          std::sqrt(std::max(0.0, 1.0 - (rock.b_m * rock.b_m) /
                                            (rock.a_m * rock.a_m)))},
         {"theta_deg", rock.theta_deg},
         {"height_m", rock.height_m},
         {"on_scarp", rock.on_scarp},
         {"rle", rle_json(rock.mask.to_rle())}});
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot open for write: " + path);
  out << j.dump() << '\n';
}

GroundTruth load_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open truth file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
  GroundTruth truth;
  try {
    truth.width = j.at("raster").at("width").get<int>();
    truth.height = j.at("raster").at("height").get<int>();
    truth.transform.origin_x = j.at("raster").at("origin_x").get<double>();
    truth.transform.origin_y = j.at("raster").at("origin_y").get<double>();
    truth.transform.res_x = j.at("raster").at("res_x").get<double>();
    truth.transform.res_y = j.at("raster").at("res_y").get<double>();
    truth.scarp_orientation_deg =
        j.at("scarp").at("orientation_deg").get<double>();
    truth.scarp_mask = decode_rle(rle_from_json(j.at("scarp").at("rle")));
    for (const auto& jr : j.at("rocks")) {
      TruthRock rock;
      rock.index = jr.at("index").get<int>();
      rock.center = {jr.at("center_world").at(0).get<double>(),
                     jr.at("center_world").at(1).get<double>()};
      rock.a_m = jr.at("a_m").get<double>();
      rock.b_m = jr.at("b_m").get<double>();
      rock.theta_deg = jr.at("theta_deg").get<double>();
      rock.height_m = jr.at("height_m").get<double>();
      rock.on_scarp = jr.at("on_scarp").get<bool>();
      rock.mask = RegionMask::from_rle(rle_from_json(jr.at("rle")));
      truth.rocks.push_back(std::move(rock));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": schema violation: " + e.what());
  }
  return truth;
}

}  // namespace rocktraits
