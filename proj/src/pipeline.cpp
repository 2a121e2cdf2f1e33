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

#include "rocktraits/pipeline.hpp"

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "rocktraits/detections.hpp"
#include "rocktraits/elevation.hpp"
#include "rocktraits/geotiff.hpp"
#include "rocktraits/registration.hpp"
#include "rocktraits/util.hpp"

namespace rocktraits {

namespace fs = std::filesystem;

namespace {

// Wraps a stage so failures carry the stage name and leave a marker file.
template <typename Fn>
auto stage(const std::string& name, const fs::path& out_dir, Fn&& fn) {
  try {
    return fn();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    std::ofstream marker(out_dir / "FAILED.txt", std::ios::trunc);
    marker << "stage: " << name << "\nerror: " << e.what() << "\n";
    throw PipelineError(name, e.what());
  }
}

nlohmann::json scarp_geojson(const ScarpModel& scarp) {
  nlohmann::json fc;
  fc["type"] = "FeatureCollection";
  fc["features"] = nlohmann::json::array();

  auto world_ring = [&](const std::vector<ContourPoint>& pts) {
    nlohmann::json ring = nlohmann::json::array();
    for (const ContourPoint& p : pts) {
      WorldPoint w = pixel_to_world(scarp.transform, {p.col + 0.5, p.row + 0.5});
      ring.push_back({w.x, w.y});
    }
    if (!pts.empty()) {
      WorldPoint w = pixel_to_world(scarp.transform,
                                    {pts.front().col + 0.5, pts.front().row + 0.5});
      ring.push_back({w.x, w.y});
    }
    return ring;
  };

  nlohmann::json contour;
  contour["type"] = "Feature";
  contour["geometry"] = {
      {"type", "Polygon"},
      {"coordinates", nlohmann::json::array({world_ring(scarp.contour)})}};
  contour["properties"] = {{"kind", "scarp_contour"}};
  fc["features"].push_back(contour);

  nlohmann::json skeleton_coords = nlohmann::json::array();
  for (int r = 0; r < scarp.skeleton.height; ++r) {
    for (int c = 0; c < scarp.skeleton.width; ++c) {
      if (!scarp.skeleton.at(c, r)) continue;
      WorldPoint w = pixel_to_world(scarp.transform, {c + 0.5, r + 0.5});
      skeleton_coords.push_back({w.x, w.y});
    }
  }
  nlohmann::json skeleton;
  skeleton["type"] = "Feature";
  skeleton["geometry"] = {{"type", "MultiPoint"},
                          {"coordinates", skeleton_coords}};
  skeleton["properties"] = {{"kind", "scarp_skeleton"}};
  fc["features"].push_back(skeleton);
  return fc;
}

nlohmann::json strike_json(const ScarpModel& scarp) {
  WorldPoint anchor =
      pixel_to_world(scarp.transform, {scarp.strike_anchor_px.first + 0.5,
                                       scarp.strike_anchor_px.second + 0.5});
  return {{"strike", {scarp.strike.first, scarp.strike.second}},
          {"cross_strike",
           {scarp.cross_strike.first, scarp.cross_strike.second}},
          {"anchor_world", {anchor.x, anchor.y}}};
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
  const fs::path out_dir(config.output_dir);
  if (config.output_dir.empty()) {
    throw ConfigError("paths.output must be set");
  }
  fs::create_directories(out_dir);

  PipelineResult result;
  auto emit = [&](const std::string& name, const std::string& content) {
    write_text_file((out_dir / name).string(), content);
    result.outputs.push_back(name);
  };

  // split: plan the grid over the orthomosaic frame.
  GeoRaster ortho = stage("split", out_dir, [&] {
    if (config.ortho_path.empty()) {
      throw ConfigError("paths.ortho must be set");
    }
    return read_raster(config.ortho_path);
  });
  GeoRaster dem = stage("split", out_dir, [&] {
    if (config.dem_path.empty()) throw ConfigError("paths.dem must be set");
    GeoRaster d = read_raster(config.dem_path);
    if (d.width != ortho.width || d.height != ortho.height) {
      throw DataError("DEM and orthomosaic dimensions differ");
    }
    return d;
  });
  TileGrid grid = stage("split", out_dir, [&] {
    return plan_tiles(ortho.width, ortho.height, config.tile_size,
                      config.overlap);
  });

  // encode (optional): elevation representations as products.
  stage("encode", out_dir, [&]() -> int {
    if (config.encoding_mode == "none") return 0;
    ElevationScale scale = (config.h_min == 0.0 && config.h_max == 0.0)
                               ? data_scale(dem)
                               : ElevationScale{config.h_min, config.h_max};
    ColormapSpec cmap = config.cmap_path.empty()
                            ? jet_colormap()
                            : load_colormap(config.cmap_path);
    GeoRaster rgb = colormap_elevation(dem, scale, cmap);
    if (config.encoding_mode == "colormap") {
      write_raster(rgb, (out_dir / "dem_colormap.tif").string());
      result.outputs.push_back("dem_colormap.tif");
    } else {
      GeoRaster rel = relative_elevation(rgb);
      write_raster(rel, (out_dir / "dem_relative.tif").string());
      result.outputs.push_back("dem_relative.tif");
    }
    return 0;
  });

  // ingest: load and validate all per-tile detections.
  std::vector<TileDetections> detections = stage("ingest", out_dir, [&] {
    if (config.detections_dir.empty()) {
      throw ConfigError("paths.detections must be set");
    }
    return load_detection_dir(config.detections_dir, grid, config.score_floor);
  });
  for (const TileDetections& d : detections) {
    result.instances_loaded += d.instances.size();
  }

  // register: merge split instances across tile boundaries.
  RockRegistry registry = stage("register", out_dir, [&] {
    return register_all(grid, detections, config.overlap_threshold);
  });
  result.rocks_registered = registry.size();
  result.merge_events = registry.merge_events();
  stage("register", out_dir, [&]() -> int {
    save_registry(registry, (out_dir / "registry.json").string());
    result.outputs.push_back("registry.json");
    return 0;
  });

  // scarp: slope, threshold, morphology, skeleton, strike.
  std::optional<ScarpModel> scarp = stage("scarp", out_dir, [&] {
    return build_scarp_model(dem, config.scarp);
  });
  std::vector<int> kept = stage("scarp", out_dir, [&] {
    if (!scarp) {
      throw DataError("no scarp found above the slope threshold");
    }
    GeoRaster mask_raster = GeoRaster::create(
        dem.width, dem.height, 1, SampleType::UInt8, dem.transform);
    for (std::size_t i = 0; i < scarp->mask.data.size(); ++i) {
      mask_raster.bands[0][i] = scarp->mask.data[i] ? 1.0f : 0.0f;
    }
    write_raster(mask_raster, (out_dir / "scarp_mask.tif").string());
    result.outputs.push_back("scarp_mask.tif");
    emit("scarp.geojson", scarp_geojson(*scarp).dump() + "\n");
    emit("strike.json", strike_json(*scarp).dump() + "\n");
    return filter_rocks(registry, *scarp);
  });
  result.rocks_on_scarp = kept.size();

  // traits: per-rock shape descriptors on the scarp subset.
  std::vector<RockTraits> traits = stage("traits", out_dir, [&] {
    std::vector<RockTraits> out;
    for (int id : kept) {
      const RegisteredRock& rock = registry.rocks().at(id);
      try {
        out.push_back(compute_traits(rock, dem.transform));
      } catch (const DegenerateShape&) {
        result.traits_skipped += 1;  // below the fit floor; recorded only
      }
    }
    return out;
  });
  stage("traits", out_dir, [&]() -> int {
    emit("rocks.csv", rocks_csv(traits));
    emit("rocks.geojson", rocks_geojson(traits, dem.transform));
    return 0;
  });

  // stats: histograms and the along/cross-strike grid.
  stage("stats", out_dir, [&]() -> int {
    std::vector<double> areas, eccs, lengths, orientations;
    for (const RockTraits& t : traits) {
      areas.push_back(t.area_m2);
      eccs.push_back(t.eccentricity);
      lengths.push_back(t.major_axis_m);
      orientations.push_back(t.orientation_deg);
    }
    double area_hi = 1.0;
    for (double a : areas) area_hi = std::max(area_hi, a);
    emit("hist_area.csv", histogram_csv(histogram(areas, 50, 0.0, area_hi),
                                        "m2"));
    emit("hist_eccentricity.csv",
         histogram_csv(histogram(eccs, 20, 0.0, 1.0), "unit"));
    emit("hist_major_axis.csv",
         histogram_csv(histogram(lengths, config.grid.n_bins,
                                 config.grid.bin_lo_m, config.grid.bin_hi_m),
                       "m"));
    emit("hist_orientation.csv",
         histogram_csv(orientation_histogram(orientations, 18), "deg"));
    if (!traits.empty()) {
      CrossStrikeGrid grid_stats = build_grid(traits, *scarp, config.grid);
      emit("grid_cells.csv", grid_cells_csv(grid_stats));
      emit("grid_bins.csv", grid_bins_csv(grid_stats));
      nlohmann::json meta = {
          {"n_areas", grid_stats.config.n_areas},
          {"n_boxes", grid_stats.config.n_boxes},
          {"n_bins", grid_stats.config.n_bins},
          {"bin_lo_m", grid_stats.config.bin_lo_m},
          {"bin_hi_m", grid_stats.config.bin_hi_m},
          {"strike_extent_m",
           {grid_stats.strike_min, grid_stats.strike_max}},
          {"cross_extent_m", {grid_stats.cross_min, grid_stats.cross_max}},
          {"degenerate_cross", grid_stats.degenerate_cross},
          {"out_of_grid", grid_stats.out_of_grid}};
      emit("grid_meta.json", meta.dump() + "\n");
    }
    return 0;
  });

  // Run manifest: everything needed to reproduce this run.
  stage("manifest", out_dir, [&]() -> int {
    nlohmann::json manifest;
    manifest["config"] = config.to_keys();
    manifest["inputs"] = nlohmann::json::array();
    auto add_input = [&manifest](const std::string& path) {
      manifest["inputs"].push_back({{"path", path},
                                    {"crc32", file_crc32(path)},
                                    {"bytes", fs::file_size(path)}});
    };
    add_input(config.ortho_path);
    add_input(config.dem_path);
    for (const TileDetections& d : detections) {
      add_input((fs::path(config.detections_dir) /
                 detection_file_name(d.tile.grid_col, d.tile.grid_row))
                    .string());
    }
    manifest["grid"] = {{"cols", grid.cols},
                        {"rows", grid.rows},
                        {"tile_size", grid.tile_size},
                        {"overlap", grid.overlap}};
    manifest["summary"] = {{"instances_loaded", result.instances_loaded},
                           {"rocks_registered", result.rocks_registered},
                           {"merge_events", result.merge_events},
                           {"rocks_on_scarp", result.rocks_on_scarp},
                           {"traits_skipped", result.traits_skipped}};
    manifest["outputs"] = result.outputs;
    write_text_file((out_dir / "manifest.json").string(),
                    manifest.dump(2) + "\n");
    result.outputs.push_back("manifest.json");
    return 0;
  });

  std::error_code ec;
  fs::remove(out_dir / "FAILED.txt", ec);
  return result;
}

PipelineConfig config_from_manifest(const std::string& manifest_path) {
  nlohmann::json manifest;
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot open manifest: " + manifest_path);
  try {
    in >> manifest;
    std::map<std::string, std::string> keys =
        manifest.at("config").get<std::map<std::string, std::string>>();
    return PipelineConfig::from_keys(keys);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(manifest_path + ": bad manifest: " + e.what());
  }
}

}  // namespace rocktraits
