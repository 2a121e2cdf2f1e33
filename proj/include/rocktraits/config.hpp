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

#include <map>
#include <string>

#include "rocktraits/eval.hpp"
#include "rocktraits/scarp.hpp"
#include "rocktraits/stats.hpp"

namespace rocktraits {

// Full pipeline configuration. Parsed from a flat key = value text file
// ('#' starts a comment); unknown keys are errors so typos cannot silently
// fall back to defaults. Key list in docs/formats.md.
struct PipelineConfig {
  // paths.*
  std::string ortho_path;
  std::string dem_path;
  std::string detections_dir;
  std::string output_dir;

  // tiling.*
  int tile_size = 400;
  int overlap = 10;

  // encoding.*  (mode: none | colormap | relative)
  std::string encoding_mode = "none";
  double h_min = 0.0;   // both 0 -> window derived from the DEM
  double h_max = 0.0;
  std::string cmap_path;  // empty -> built-in jet

  // registration.*
  double overlap_threshold = 0.5;
  double score_floor = 0.0;

  // scarp.*
  ScarpParams scarp;

  // grid.*
  GridConfig grid;

  // eval.*
  EvalParams eval;

  int threads = 0;  // 0 = hardware default

  // The exact key = value map this config serializes to (used by the run
  // manifest so a run can be reproduced from it alone).
  std::map<std::string, std::string> to_keys() const;
  static PipelineConfig from_keys(
      const std::map<std::string, std::string>& keys);
};

PipelineConfig parse_config_text(const std::string& text);
PipelineConfig load_config(const std::string& path);

}  // namespace rocktraits
