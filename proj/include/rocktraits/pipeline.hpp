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

#include "rocktraits/config.hpp"

namespace rocktraits {

// A stage failure, annotated with the stage that raised it.
class PipelineError : public Error {
 public:
  PipelineError(const std::string& stage, const std::string& what)
      : Error("stage " + stage + ": " + what), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct PipelineResult {
  std::size_t instances_loaded = 0;
  std::size_t rocks_registered = 0;
  std::uint64_t merge_events = 0;
  std::size_t rocks_on_scarp = 0;
  std::size_t traits_skipped = 0;  // rocks below the ellipse-fit area floor
  std::vector<std::string> outputs;  // paths written, relative to output dir
};

// Runs split -> (encode) -> ingest -> register -> scarp -> traits -> stats
// and writes all products plus a run manifest into config.output_dir. The
// manifest records every parameter and input checksum; outputs are
// deterministic for identical inputs and config. A stage failure raises
// PipelineError after writing FAILED.txt with the stage name.
PipelineResult run_pipeline(const PipelineConfig& config);

// Rebuilds the exact config recorded in a run manifest (reproduction path).
PipelineConfig config_from_manifest(const std::string& manifest_path);

}  // namespace rocktraits
