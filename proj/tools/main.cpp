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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rocktraits/detections.hpp"
#include "rocktraits/elevation.hpp"
#include "rocktraits/errors.hpp"
#include "rocktraits/eval.hpp"
#include "rocktraits/geotiff.hpp"
#include "rocktraits/pipeline.hpp"
#include "rocktraits/registration.hpp"
#include "rocktraits/scarp.hpp"
#include "rocktraits/shape.hpp"
#include "rocktraits/stats.hpp"
#include "rocktraits/synth.hpp"
#include "rocktraits/util.hpp"

namespace fs = std::filesystem;
using namespace rocktraits;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

nlohmann::json tile_manifest_json(const TileGrid& grid,
                                  const GeoTransform& gt) {
  nlohmann::json j;
  j["raster"] = {{"width", grid.raster_width},
                 {"height", grid.raster_height},
                 {"origin_x", gt.origin_x},
                 {"origin_y", gt.origin_y},
                 {"res_x", gt.res_x},
                 {"res_y", gt.res_y}};
  j["tile_size"] = grid.tile_size;
  j["overlap"] = grid.overlap;
  j["stride"] = grid.tile_size - grid.overlap;
  j["cols"] = grid.cols;
  j["rows"] = grid.rows;
  j["tiles"] = nlohmann::json::array();
  for (int row = 0; row < grid.rows; ++row) {
    for (int col = 0; col < grid.cols; ++col) {
      Tile t = grid.tile(col, row);
      j["tiles"].push_back({{"col", col},
                            {"row", row},
                            {"x0", t.x0},
                            {"y0", t.y0},
                            {"w", t.w},
                            {"h", t.h}});
    }
  }
  return j;
}

TileGrid grid_from_manifest(const std::string& path, GeoTransform* gt_out) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open tile manifest: " + path);
  nlohmann::json j;
  try {
    in >> j;
    TileGrid grid = plan_tiles(j.at("raster").at("width").get<int>(),
                               j.at("raster").at("height").get<int>(),
                               j.at("tile_size").get<int>(),
                               j.at("overlap").get<int>());
    if (gt_out) {
      gt_out->origin_x = j.at("raster").at("origin_x").get<double>();
      gt_out->origin_y = j.at("raster").at("origin_y").get<double>();
      gt_out->res_x = j.at("raster").at("res_x").get<double>();
      gt_out->res_y = j.at("raster").at("res_y").get<double>();
    }
    return grid;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": bad tile manifest: " + e.what());
  }
}

int cmd_split(const std::string& input, const std::string& out_dir,
              int tile_size, int overlap, bool write_tiles) {
  GeoRaster raster = read_raster(input);
  TileGrid grid = plan_tiles(raster.width, raster.height, tile_size, overlap);
  fs::create_directories(out_dir);
  write_text_file((fs::path(out_dir) / "tiles.json").string(),
                  tile_manifest_json(grid, raster.transform).dump(2) + "\n");
  if (write_tiles) {
    for (int row = 0; row < grid.rows; ++row) {
      for (int col = 0; col < grid.cols; ++col) {
        GeoRaster tile = extract_tile(raster, grid.tile(col, row));
        std::string name = "tile_" + std::to_string(row) + "_" +
                           std::to_string(col) + ".tif";
        write_raster(tile, (fs::path(out_dir) / name).string());
      }
    }
  }
  std::cout << "planned " << grid.cols << "x" << grid.rows << " tiles ("
            << grid.tile_count() << " total)"
            << (write_tiles ? ", tiles written" : "") << "\n";
  return kExitOk;
}

int cmd_encode_dem(const std::string& input, const std::string& output,
                   const std::string& mode, double h_min, double h_max,
                   const std::string& cmap_path, bool eight_bit) {
  GeoRaster dem = read_raster(input);
  ElevationScale scale = (h_min == 0.0 && h_max == 0.0)
                             ? data_scale(dem)
                             : ElevationScale{h_min, h_max};
  ColormapSpec cmap =
      cmap_path.empty() ? jet_colormap() : load_colormap(cmap_path);
  GeoRaster encoded = colormap_elevation(dem, scale, cmap);
  if (mode == "relative") {
    encoded = relative_elevation(encoded);
  } else if (mode != "colormap") {
    throw ConfigError("--mode must be colormap or relative");
  }
  if (eight_bit) encoded = quantize_unit_raster(encoded);
  write_raster(encoded, output);
  std::cout << "wrote " << output << " (window "
            << format_double(scale.h_min) << ".." << format_double(scale.h_max)
            << ")\n";
  return kExitOk;
}

int cmd_ingest(const std::string& dets_dir, const std::string& manifest,
               double score_floor) {
  TileGrid grid = grid_from_manifest(manifest, nullptr);
  std::vector<TileDetections> dets =
      load_detection_dir(dets_dir, grid, score_floor);
  std::size_t instances = 0;
  for (const TileDetections& d : dets) instances += d.instances.size();
  std::cout << "validated " << dets.size() << " tiles, " << instances
            << " instances\n";
  return kExitOk;
}

int cmd_register(const std::string& dets_dir, const std::string& manifest,
                 const std::string& output, double threshold,
                 double score_floor) {
  TileGrid grid = grid_from_manifest(manifest, nullptr);
  std::vector<TileDetections> dets =
      load_detection_dir(dets_dir, grid, score_floor);
  RockRegistry registry = register_all(grid, dets, threshold);
  save_registry(registry, output);
  std::size_t instances = 0;
  for (const TileDetections& d : dets) instances += d.instances.size();
  std::cout << "registered " << registry.size() << " rocks from " << instances
            << " instances (" << registry.merge_events() << " merges)\n";
  return kExitOk;
}

int cmd_scarp(const std::string& dem_path, const std::string& out_dir,
              const ScarpParams& params) {
  GeoRaster dem = read_raster(dem_path);
  std::optional<ScarpModel> scarp = build_scarp_model(dem, params);
  if (!scarp) {
    std::cerr << "no scarp found above the slope threshold\n";
    return kExitData;
  }
  fs::create_directories(out_dir);
  GeoRaster mask_raster = GeoRaster::create(dem.width, dem.height, 1,
                                            SampleType::UInt8, dem.transform);
  for (std::size_t i = 0; i < scarp->mask.data.size(); ++i) {
    mask_raster.bands[0][i] = scarp->mask.data[i] ? 1.0f : 0.0f;
  }
  write_raster(mask_raster, (fs::path(out_dir) / "scarp_mask.tif").string());

  nlohmann::json strike = {{"strike", {scarp->strike.first, scarp->strike.second}},
                           {"cross_strike",
                            {scarp->cross_strike.first,
                             scarp->cross_strike.second}}};
  write_text_file((fs::path(out_dir) / "strike.json").string(),
                  strike.dump() + "\n");
  std::cout << "scarp mask " << scarp->mask.area() << " px, strike ("
            << format_double(scarp->strike.first) << ", "
            << format_double(scarp->strike.second) << ")\n";
  return kExitOk;
}

int cmd_traits(const std::string& registry_path, const std::string& dem_path,
               const std::string& output_csv) {
  RockRegistry registry = load_registry(registry_path);
  GeoRaster dem = read_raster(dem_path);
  std::vector<RockTraits> traits;
  std::size_t skipped = 0;
  for (const auto& [id, rock] : registry.rocks()) {
    try {
      traits.push_back(compute_traits(rock, dem.transform));
    } catch (const DegenerateShape&) {
      ++skipped;
    }
  }
  write_text_file(output_csv, rocks_csv(traits));
  std::cout << "computed traits for " << traits.size() << " rocks ("
            << skipped << " below fit floor)\n";
  return kExitOk;
}

int cmd_synth(const std::string& spec_path, const std::string& out_dir) {
  SceneSpec spec = load_scene_spec(spec_path);
  Scene scene = generate_scene(spec);
  fs::create_directories(out_dir);
  write_raster(scene.dem, (fs::path(out_dir) / "dem.tif").string());
  write_raster(scene.ortho, (fs::path(out_dir) / "ortho.tif").string());
  save_truth(scene.truth, (fs::path(out_dir) / "truth.json").string());

  TileGrid grid = plan_tiles(spec.width, spec.height);
  fs::path dets_dir = fs::path(out_dir) / "detections";
  fs::create_directories(dets_dir);
  for (const TileDetections& dets : oracle_detect(scene.truth, grid)) {
    save_tile_detections(
        dets, (dets_dir /
               detection_file_name(dets.tile.grid_col, dets.tile.grid_row))
                  .string());
  }
  write_text_file((fs::path(out_dir) / "tiles.json").string(),
                  tile_manifest_json(grid, scene.dem.transform).dump(2) + "\n");
  std::cout << "scene with " << scene.truth.rocks.size() << " rocks in "
            << out_dir << "\n";
  return kExitOk;
}

int cmd_eval(const std::string& preds_dir, const std::string& gt_dir,
             const std::string& manifest, const std::string& out_prefix,
             const EvalParams& params) {
  TileGrid grid = grid_from_manifest(manifest, nullptr);
  std::vector<TileDetections> preds = load_detection_dir(preds_dir, grid);
  std::vector<TileDetections> gts = load_detection_dir(gt_dir, grid);
  std::vector<EvalFrame> frames;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    EvalFrame frame;
    for (const InstanceRecord& inst : preds[i].instances) {
      frame.preds.push_back({inst.bbox,
                             RegionMask::from_rle(inst.rle), inst.score});
    }
    for (const InstanceRecord& inst : gts[i].instances) {
      frame.gts.push_back({inst.bbox,
                           RegionMask::from_rle(inst.rle), inst.score});
    }
    frames.push_back(std::move(frame));
  }
  std::optional<MetricReport> report = evaluate_frames(frames, params);
  if (!report) {
    std::cerr << "no ground truth instances; metrics undefined\n";
    return kExitData;
  }
  write_text_file(out_prefix + ".json", report_json(*report, params));
  write_text_file(out_prefix + ".csv", report_csv(*report));
  std::cout << report_csv(*report);
  return kExitOk;
}

int cmd_run(const std::string& config_path) {
  PipelineConfig config = load_config(config_path);
  PipelineResult result = run_pipeline(config);
  std::cout << "instances " << result.instances_loaded << " -> rocks "
            << result.rocks_registered << " (" << result.merge_events
            << " merges), on scarp " << result.rocks_on_scarp << "\n";
  for (const std::string& name : result.outputs) {
    std::cout << "  " << name << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Georeferenced rock-trait extraction from orthomosaic + DEM "
               "rasters and per-tile instance masks"};
  app.require_subcommand(1);

  // split
  auto* split = app.add_subcommand("split", "Plan overlap tiles, write manifest"
                                            " and optionally tile rasters");
  std::string split_input, split_out;
  int split_tile = 400, split_overlap = 10;
  bool split_write = false;
  split->add_option("--input", split_input, "Input GeoTIFF")->required();
  split->add_option("--out", split_out, "Output directory")->required();
  split->add_option("--tile-size", split_tile, "Tile size in pixels");
  split->add_option("--overlap", split_overlap, "Tile overlap in pixels");
  split->add_flag("--write-tiles", split_write, "Write tile GeoTIFFs");

  // encode-dem
  auto* encode = app.add_subcommand("encode-dem",
                                    "Colormap / relative elevation encoding");
  std::string enc_input, enc_output, enc_mode = "colormap", enc_cmap;
  double enc_hmin = 0.0, enc_hmax = 0.0;
  bool enc_8bit = false;
  encode->add_option("--input", enc_input, "Input DEM GeoTIFF")->required();
  encode->add_option("--output", enc_output, "Output GeoTIFF")->required();
  encode->add_option("--mode", enc_mode, "colormap | relative");
  encode->add_option("--h-min", enc_hmin, "Scale window minimum (meters)");
  encode->add_option("--h-max", enc_hmax, "Scale window maximum (meters)");
  encode->add_option("--cmap", enc_cmap, "Colormap spec JSON file");
  encode->add_flag("--eight-bit", enc_8bit, "Quantize output to uint8");

  // ingest
  auto* ingest = app.add_subcommand("ingest",
                                    "Validate per-tile detection files");
  std::string ing_dets, ing_manifest;
  double ing_floor = 0.0;
  ingest->add_option("--detections", ing_dets, "Detection directory")
      ->required();
  ingest->add_option("--manifest", ing_manifest, "Tile manifest JSON")
      ->required();
  ingest->add_option("--score-floor", ing_floor, "Drop instances below");

  // register
  auto* reg = app.add_subcommand("register",
                                 "Merge tile detections into global rocks");
  std::string reg_dets, reg_manifest, reg_out = "registry.json";
  double reg_threshold = 0.5, reg_floor = 0.0;
  reg->add_option("--detections", reg_dets, "Detection directory")->required();
  reg->add_option("--manifest", reg_manifest, "Tile manifest JSON")->required();
  reg->add_option("--output", reg_out, "Registry JSON output");
  reg->add_option("--threshold", reg_threshold,
                  "Mask overlap ratio threshold in (0, 1]");
  reg->add_option("--score-floor", reg_floor, "Drop instances below");

  // scarp
  auto* scarp_cmd = app.add_subcommand("scarp",
                                       "Extract the fault scarp from a DEM");
  std::string scarp_dem, scarp_out;
  ScarpParams scarp_params;
  scarp_cmd->add_option("--dem", scarp_dem, "Input DEM GeoTIFF")->required();
  scarp_cmd->add_option("--out", scarp_out, "Output directory")->required();
  scarp_cmd->add_option("--sigma", scarp_params.gaussian_sigma_px,
                        "Gaussian sigma (pixels)");
  scarp_cmd->add_option("--slope-threshold",
                        scarp_params.slope_threshold_deg,
                        "Slope threshold (degrees)");
  scarp_cmd->add_option("--open-radius", scarp_params.morph.open_radius,
                        "Opening radius (pixels)");
  scarp_cmd->add_option("--close-radius", scarp_params.morph.close_radius,
                        "Closing radius (pixels)");
  scarp_cmd->add_option("--subsection", scarp_params.subsection,
                        "Skeleton fraction for the strike fit");

  // traits
  auto* traits_cmd = app.add_subcommand("traits",
                                        "Shape traits for registered rocks");
  std::string tr_registry, tr_dem, tr_out = "rocks.csv";
  traits_cmd->add_option("--registry", tr_registry, "Registry JSON")
      ->required();
  traits_cmd->add_option("--dem", tr_dem, "Reference raster (geotransform)")
      ->required();
  traits_cmd->add_option("--output", tr_out, "Output CSV");

  // stats/run/synth/eval
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic scene");
  std::string synth_spec, synth_out;
  synth_cmd->add_option("--spec", synth_spec, "Scene spec JSON")->required();
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();

  auto* eval_cmd = app.add_subcommand("eval", "Detection metrics vs ground truth");
  std::string ev_preds, ev_gt, ev_manifest, ev_out = "metrics";
  EvalParams ev_params;
  eval_cmd->add_option("--preds", ev_preds, "Prediction directory")->required();
  eval_cmd->add_option("--gt", ev_gt, "Ground-truth directory")->required();
  eval_cmd->add_option("--manifest", ev_manifest, "Tile manifest JSON")
      ->required();
  eval_cmd->add_option("--out", ev_out, "Output prefix (.json/.csv)");
  eval_cmd->add_option("--large-area", ev_params.large_area_px,
                       "Large-object pixel area floor");

  auto* run_cmd = app.add_subcommand("run", "Full pipeline from a config file");
  std::string run_config;
  run_cmd->add_option("--config", run_config, "Pipeline config file")
      ->required();

  // stats subcommand: recompute stats products from a registry + scarp data
  auto* stats_cmd = app.add_subcommand(
      "stats", "Histograms and grid products from registry + DEM");
  std::string st_registry, st_dem, st_out;
  GridConfig st_grid;
  ScarpParams st_scarp;
  stats_cmd->add_option("--registry", st_registry, "Registry JSON")
      ->required();
  stats_cmd->add_option("--dem", st_dem, "DEM GeoTIFF")->required();
  stats_cmd->add_option("--out", st_out, "Output directory")->required();
  stats_cmd->add_option("--n-areas", st_grid.n_areas, "Grid areas along strike");
  stats_cmd->add_option("--n-boxes", st_grid.n_boxes, "Grid boxes across strike");
  stats_cmd->add_option("--n-bins", st_grid.n_bins, "Diameter bins per box");
  stats_cmd->add_option("--bin-hi", st_grid.bin_hi_m, "Diameter bin range top");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (split->parsed()) {
      return cmd_split(split_input, split_out, split_tile, split_overlap,
                       split_write);
    }
    if (encode->parsed()) {
      return cmd_encode_dem(enc_input, enc_output, enc_mode, enc_hmin,
                            enc_hmax, enc_cmap, enc_8bit);
    }
    if (ingest->parsed()) {
      return cmd_ingest(ing_dets, ing_manifest, ing_floor);
    }
    if (reg->parsed()) {
      return cmd_register(reg_dets, reg_manifest, reg_out, reg_threshold,
                          reg_floor);
    }
    if (scarp_cmd->parsed()) {
      return cmd_scarp(scarp_dem, scarp_out, scarp_params);
    }
    if (traits_cmd->parsed()) {
      return cmd_traits(tr_registry, tr_dem, tr_out);
    }
    if (synth_cmd->parsed()) {
      return cmd_synth(synth_spec, synth_out);
    }
    if (eval_cmd->parsed()) {
      return cmd_eval(ev_preds, ev_gt, ev_manifest, ev_out, ev_params);
    }
    if (stats_cmd->parsed()) {
      RockRegistry registry = load_registry(st_registry);
      GeoRaster dem = read_raster(st_dem);
      std::optional<ScarpModel> scarp = build_scarp_model(dem, st_scarp);
      if (!scarp) {
        std::cerr << "no scarp found above the slope threshold\n";
        return kExitData;
      }
      std::vector<int> kept = filter_rocks(registry, *scarp);
      std::vector<RockTraits> traits;
      for (int id : kept) {
        try {
          traits.push_back(
              compute_traits(registry.rocks().at(id), dem.transform));
        } catch (const DegenerateShape&) {
        }
      }
      fs::create_directories(st_out);
      std::vector<double> lengths;
      for (const RockTraits& t : traits) lengths.push_back(t.major_axis_m);
      write_text_file((fs::path(st_out) / "hist_major_axis.csv").string(),
                      histogram_csv(histogram(lengths, st_grid.n_bins,
                                              st_grid.bin_lo_m,
                                              st_grid.bin_hi_m),
                                    "m"));
      write_text_file((fs::path(st_out) / "rocks.csv").string(),
                      rocks_csv(traits));
      write_text_file((fs::path(st_out) / "rocks.geojson").string(),
                      rocks_geojson(traits, dem.transform));
      if (!traits.empty()) {
        CrossStrikeGrid grid_stats = build_grid(traits, *scarp, st_grid);
        write_text_file((fs::path(st_out) / "grid_cells.csv").string(),
                        grid_cells_csv(grid_stats));
        write_text_file((fs::path(st_out) / "grid_bins.csv").string(),
                        grid_bins_csv(grid_stats));
      }
      std::cout << "stats written for " << traits.size() << " rocks\n";
      return kExitOk;
    }
    if (run_cmd->parsed()) {
      return cmd_run(run_config);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const PipelineError& e) {
    std::cerr << "pipeline error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
