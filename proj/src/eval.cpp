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

#include "rocktraits/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "rocktraits/errors.hpp"
#include "rocktraits/util.hpp"

namespace rocktraits {

namespace {

enum class Kind { Bbox, Mask };

struct FramePrep {
  std::vector<int> pred_order;            // indices sorted by descending score
  std::vector<std::uint64_t> pred_areas;  // mask pixel areas
  std::vector<std::uint64_t> gt_areas;
  // IoU matrices [pred][gt] in pred_order ordering.
  std::vector<std::vector<double>> iou_bbox;
  std::vector<std::vector<double>> iou_mask;
};

double safe_iou_bbox(const PixelBox& a, const PixelBox& b) {
  long inter = a.intersection(b).area();
  long uni = a.area() + b.area() - inter;
  return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

double safe_iou_mask(const RegionMask& a, const RegionMask& b) {
  std::uint64_t inter = intersection_area(a, b);
  std::uint64_t uni = a.area() + b.area() - inter;
  return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

FramePrep prepare(const EvalFrame& frame, const EvalParams& params) {
  FramePrep prep;
  prep.pred_order.resize(frame.preds.size());
  std::iota(prep.pred_order.begin(), prep.pred_order.end(), 0);
  std::stable_sort(prep.pred_order.begin(), prep.pred_order.end(),
                   [&](int a, int b) {
                     return frame.preds[static_cast<std::size_t>(a)].score >
                            frame.preds[static_cast<std::size_t>(b)].score;
                   });
  if (static_cast<int>(prep.pred_order.size()) > params.max_detections) {
    prep.pred_order.resize(static_cast<std::size_t>(params.max_detections));
  }
  for (const EvalInstance& gt : frame.gts) {
    prep.gt_areas.push_back(gt.mask.area());
  }
  prep.iou_bbox.resize(prep.pred_order.size());
  prep.iou_mask.resize(prep.pred_order.size());
  prep.pred_areas.resize(prep.pred_order.size());
  for (std::size_t d = 0; d < prep.pred_order.size(); ++d) {
    const EvalInstance& pred =
        frame.preds[static_cast<std::size_t>(prep.pred_order[d])];
    prep.pred_areas[d] = pred.mask.area();
    prep.iou_bbox[d].resize(frame.gts.size());
    prep.iou_mask[d].resize(frame.gts.size());
    for (std::size_t g = 0; g < frame.gts.size(); ++g) {
      prep.iou_bbox[d][g] = safe_iou_bbox(pred.bbox, frame.gts[g].bbox);
      prep.iou_mask[d][g] = safe_iou_mask(pred.mask, frame.gts[g].mask);
    }
  }
  return prep;
}

struct PooledDet {
  double score;
  bool matched;
  bool ignored;
};

struct SweepResult {
  double ap = 0.0;      // 101-point interpolated, fraction
  double recall = 0.0;  // matched / non-ignored gt, fraction
  std::uint64_t n_gt = 0;
};

// One matching + PR computation for a fixed threshold, kind and area rule.
SweepResult sweep_threshold(const std::vector<EvalFrame>& frames,
                            const std::vector<FramePrep>& preps, double t,
                            Kind kind, bool large_only,
                            const EvalParams& params) {
  std::vector<PooledDet> pooled;
  std::uint64_t n_gt = 0;
  std::uint64_t matched_gt = 0;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const EvalFrame& frame = frames[f];
    const FramePrep& prep = preps[f];
    const auto& ious = kind == Kind::Bbox ? prep.iou_bbox : prep.iou_mask;

    std::vector<bool> gt_ignored(frame.gts.size(), false);
    if (large_only) {
      for (std::size_t g = 0; g < frame.gts.size(); ++g) {
        gt_ignored[g] =
            static_cast<double>(prep.gt_areas[g]) <= params.large_area_px;
      }
    }
    for (bool ig : gt_ignored) {
      if (!ig) ++n_gt;
    }

    std::vector<bool> gt_matched(frame.gts.size(), false);
    for (std::size_t d = 0; d < prep.pred_order.size(); ++d) {
      // Valid (non-ignored) ground truths take priority; ignored ones can
      // only absorb a prediction that matched nothing valid. Equal IoUs
      // resolve to the later ground truth in index order.
      int best = -1;
      double best_iou = t;
      auto scan = [&](bool want_ignored) {
        for (std::size_t g = 0; g < frame.gts.size(); ++g) {
          if (gt_matched[g] || gt_ignored[g] != want_ignored) continue;
          if (ious[d][g] < best_iou) continue;
          best = static_cast<int>(g);
          best_iou = ious[d][g];
        }
      };
      scan(false);
      if (best < 0) scan(true);
      PooledDet det;
      det.score =
          frame.preds[static_cast<std::size_t>(prep.pred_order[d])].score;
      det.matched = best >= 0;
      det.ignored = false;
      if (best >= 0) {
        gt_matched[static_cast<std::size_t>(best)] = true;
        if (gt_ignored[static_cast<std::size_t>(best)]) {
          det.ignored = true;  // matched an ignored gt
        } else {
          ++matched_gt;
        }
      } else if (large_only &&
                 static_cast<double>(prep.pred_areas[d]) <=
                     params.large_area_px) {
        det.ignored = true;  // unmatched small detection
      }
      pooled.push_back(det);
    }
  }

  SweepResult result;
  result.n_gt = n_gt;
  if (n_gt == 0) return result;

  std::stable_sort(pooled.begin(), pooled.end(),
                   [](const PooledDet& a, const PooledDet& b) {
                     return a.score > b.score;
                   });
  std::vector<double> precision;
  std::vector<double> recall;
  std::uint64_t tp = 0, fp = 0;
  for (const PooledDet& det : pooled) {
    if (det.ignored) continue;
    if (det.matched) {
      ++tp;
    } else {
      ++fp;
    }
    precision.push_back(static_cast<double>(tp) /
                        static_cast<double>(tp + fp));
    recall.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
  }
  result.recall = static_cast<double>(matched_gt) / static_cast<double>(n_gt);

  // Precision envelope (monotone non-increasing from the right), then the
  // 101-point interpolation over recall levels 0, 0.01, ..., 1.
  for (std::size_t i = precision.size(); i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double ap = 0.0;
  for (int ri = 0; ri <= 100; ++ri) {
    double r = ri / 100.0;
    auto it = std::lower_bound(recall.begin(), recall.end(), r);
    if (it != recall.end()) {
      ap += precision[static_cast<std::size_t>(it - recall.begin())];
    }
  }
  result.ap = ap / 101.0;
  return result;
}

std::optional<MetricSection> section_for_kind(
    const std::vector<EvalFrame>& frames, const std::vector<FramePrep>& preps,
    Kind kind, const EvalParams& params) {
  MetricSection section;
  double ap_sum = 0.0, ar_sum = 0.0;
  bool any_gt = false;
  for (double t : params.thresholds) {
    SweepResult r = sweep_threshold(frames, preps, t, kind, false, params);
    any_gt = any_gt || r.n_gt > 0;
    ap_sum += r.ap;
    ar_sum += r.recall;
  }
  if (!any_gt) return std::nullopt;
  const double n = static_cast<double>(params.thresholds.size());
  section.ap1 = 100.0 * ap_sum / n;
  section.ar1 = 100.0 * ar_sum / n;
  section.ap2 =
      100.0 * sweep_threshold(frames, preps, 0.50, kind, false, params).ap;
  section.ap3 =
      100.0 * sweep_threshold(frames, preps, 0.75, kind, false, params).ap;

  double ap4_sum = 0.0, ar2_sum = 0.0;
  bool any_large = false;
  for (double t : params.thresholds) {
    SweepResult r = sweep_threshold(frames, preps, t, kind, true, params);
    any_large = any_large || r.n_gt > 0;
    ap4_sum += r.ap;
    ar2_sum += r.recall;
  }
  if (any_large) {
    section.ap4 = 100.0 * ap4_sum / n;
    section.ar2 = 100.0 * ar2_sum / n;
  }
  return section;
}

}  // namespace

std::optional<MetricReport> evaluate_frames(const std::vector<EvalFrame>& frames,
                                            const EvalParams& params) {
  if (params.thresholds.empty()) {
    throw ConfigError("evaluation needs at least one IoU threshold");
  }
  for (const EvalFrame& frame : frames) {
    for (const EvalInstance& gt : frame.gts) {
      if (gt.mask.empty()) throw DataError("ground-truth instance has empty mask");
    }
    for (const EvalInstance& pred : frame.preds) {
      if (pred.mask.empty()) throw DataError("prediction has empty mask");
    }
  }
  std::size_t total_gt = 0;
  for (const EvalFrame& frame : frames) total_gt += frame.gts.size();
  if (total_gt == 0) return std::nullopt;

  std::vector<FramePrep> preps;
  preps.reserve(frames.size());
  for (const EvalFrame& frame : frames) preps.push_back(prepare(frame, params));

  MetricReport report;
  auto bbox = section_for_kind(frames, preps, Kind::Bbox, params);
  auto mask = section_for_kind(frames, preps, Kind::Mask, params);
  if (!bbox || !mask) return std::nullopt;
  report.bbox = *bbox;
  report.mask = *mask;
  return report;
}

std::optional<MetricReport> evaluate(const std::vector<EvalInstance>& preds,
                                     const std::vector<EvalInstance>& gts,
                                     const EvalParams& params) {
  return evaluate_frames({EvalFrame{preds, gts}}, params);
}

namespace {

nlohmann::json section_json(const MetricSection& s) {
  nlohmann::json j;
  j["AP1"] = s.ap1;
  j["AP2"] = s.ap2;
  j["AP3"] = s.ap3;
  j["AP4"] = s.ap4 ? nlohmann::json(*s.ap4) : nlohmann::json(nullptr);
  j["AR1"] = s.ar1;
  j["AR2"] = s.ar2 ? nlohmann::json(*s.ar2) : nlohmann::json(nullptr);
  return j;
}

std::string section_csv_row(const std::string& name, const MetricSection& s) {
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("");
  };
  return name + "," + format_double(s.ap1) + "," + format_double(s.ap2) +
         "," + format_double(s.ap3) + "," + opt(s.ap4) + "," +
         format_double(s.ar1) + "," + opt(s.ar2) + "\n";
}

}  // namespace

std::string report_json(const MetricReport& report, const EvalParams& params) {
  nlohmann::json j;
  j["detection_bbox"] = section_json(report.bbox);
  j["segmentation_mask"] = section_json(report.mask);
  j["iou_thresholds"] = params.thresholds;
  j["large_area_px"] = params.large_area_px;
  j["max_detections"] = params.max_detections;
  return j.dump() + "\n";
}

std::string report_csv(const MetricReport& report) {
  std::string csv = "kind,AP1,AP2,AP3,AP4,AR1,AR2\n";
  csv += section_csv_row("detection_bbox", report.bbox);
  csv += section_csv_row("segmentation_mask", report.mask);
  return csv;
}

}  // namespace rocktraits
