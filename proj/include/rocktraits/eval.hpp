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
#include <string>
#include <vector>

#include "rocktraits/mask.hpp"

namespace rocktraits {

struct EvalInstance {
  PixelBox bbox;
  RegionMask mask;
  double score = 1.0;  // ignored for ground truth
};

// One image/tile worth of predictions and ground truth.
struct EvalFrame {
  std::vector<EvalInstance> preds;
  std::vector<EvalInstance> gts;
};

struct EvalParams {
  // IoU thresholds 0.50:0.05:0.95.
  std::vector<double> thresholds = {0.50, 0.55, 0.60, 0.65, 0.70,
                                    0.75, 0.80, 0.85, 0.90, 0.95};
  // "Large object" floor: mask pixel area must exceed this.
  double large_area_px = 96.0 * 96.0;
  int max_detections = 100;
};

// Percentages in [0, 100]. ap4 / ar2 are absent when no ground-truth
// object qualifies as large.
struct MetricSection {
  double ap1 = 0.0;  // AP averaged over the threshold sweep
  double ap2 = 0.0;  // AP at IoU 0.50
  double ap3 = 0.0;  // AP at IoU 0.75
  std::optional<double> ap4;  // ap1 restricted to large objects
  double ar1 = 0.0;  // average recall over the sweep
  std::optional<double> ar2;  // ar1 restricted to large objects
};

struct MetricReport {
  MetricSection bbox;
  MetricSection mask;
};

// Greedy score-order matching per threshold, each ground truth matched at
// most once; AP from the 101-point interpolated precision-recall curve;
// AR as mean matched fraction over thresholds with up to max_detections
// predictions per frame. Large-object variants ignore small ground truths
// and the predictions absorbed by or left unmatched at small areas.
// Returns nullopt when the ground truth set is empty (metrics undefined).
std::optional<MetricReport> evaluate_frames(const std::vector<EvalFrame>& frames,
                                            const EvalParams& params = {});

// Single-frame convenience used by calibration tests.
std::optional<MetricReport> evaluate(const std::vector<EvalInstance>& preds,
                                     const std::vector<EvalInstance>& gts,
                                     const EvalParams& params = {});

std::string report_json(const MetricReport& report, const EvalParams& params);
std::string report_csv(const MetricReport& report);

}  // namespace rocktraits
