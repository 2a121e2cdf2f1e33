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

#include "rocktraits/shape.hpp"

#include <cmath>
#include <numbers>

#include "rocktraits/errors.hpp"

namespace rocktraits {

namespace {

RefinedMask refine_local(const Mask& local, long off_x, long off_y) {
  if (local.area() == 0) {
    throw DataError("cannot refine an empty mask");
  }
  auto [labels, count] = label_components(local);

  // Enclosed area of a component = its pixels plus any holes it surrounds,
  // i.e. the filled component. The largest one wins.
  std::uint64_t best_area = 0;
  int best_label = 1;
  Mask best_filled;
  for (int l = 1; l <= count; ++l) {
    Mask filled = fill_holes(component_mask(local, labels, l));
    std::uint64_t area = filled.area();
    if (area > best_area) {
      best_area = area;
      best_label = l;
      best_filled = std::move(filled);
    }
  }
  (void)best_label;

  // Crop to the component's bbox.
  long min_c = best_filled.width, max_c = -1;
  long min_r = best_filled.height, max_r = -1;
  for (int r = 0; r < best_filled.height; ++r) {
    for (int c = 0; c < best_filled.width; ++c) {
      if (!best_filled.at(c, r)) continue;
      min_c = std::min<long>(min_c, c);
      max_c = std::max<long>(max_c, c);
      min_r = std::min<long>(min_r, r);
      max_r = std::max<long>(max_r, r);
    }
  }
  RefinedMask out;
  out.box = {off_x + min_c, off_y + min_r, max_c - min_c + 1,
             max_r - min_r + 1};
  out.mask = Mask(static_cast<int>(out.box.w), static_cast<int>(out.box.h));
  for (long r = min_r; r <= max_r; ++r) {
    for (long c = min_c; c <= max_c; ++c) {
      out.mask.set(static_cast<int>(c - min_c), static_cast<int>(r - min_r),
                   best_filled.at(static_cast<int>(c), static_cast<int>(r)));
    }
  }
  out.pixel_area = best_area;

  for (Contour& contour : trace_contours(out.mask)) {
    if (contour.is_hole) continue;
    out.exterior_contour.reserve(contour.points.size());
    for (const ContourPoint& p : contour.points) {
      out.exterior_contour.push_back({p.col + static_cast<int>(out.box.x),
                                      p.row + static_cast<int>(out.box.y)});
    }
    break;
  }
  return out;
}

}  // namespace

RefinedMask refine_mask(const Mask& mask) { return refine_local(mask, 0, 0); }

RefinedMask refine_mask(const RegionMask& mask) {
  if (mask.empty()) throw DataError("cannot refine an empty mask");
  PixelBox box = mask.bbox();
  return refine_local(mask.to_mask(box), box.x, box.y);
}

double pixel_area_to_m2(std::uint64_t pixel_area, double res) {
  if (!(res > 0.0)) throw ConfigError("resolution must be positive");
  return static_cast<double>(pixel_area) * res * res;
}

EllipseFit fit_ellipse(const RefinedMask& refined) {
  if (refined.pixel_area < kMinFitArea) {
    throw DegenerateShape("mask area " + std::to_string(refined.pixel_area) +
                          " px below the fit floor of " +
                          std::to_string(kMinFitArea));
  }
  // Raw moments over pixel coordinates within the crop.
  double m00 = 0.0, m10 = 0.0, m01 = 0.0, m11 = 0.0, m20 = 0.0, m02 = 0.0;
  for (int r = 0; r < refined.mask.height; ++r) {
    for (int c = 0; c < refined.mask.width; ++c) {
      if (!refined.mask.at(c, r)) continue;
      double x = c;
      double y = r;
      m00 += 1.0;
      m10 += x;
      m01 += y;
      m11 += x * y;
      m20 += x * x;
      m02 += y * y;
    }
  }
  double xc = m10 / m00;
  double yc = m01 / m00;
  double mu20 = m20 / m00 - xc * xc;
  double mu02 = m02 / m00 - yc * yc;
  double mu11 = m11 / m00 - xc * yc;

  // Eigenvalues of [[mu20, mu11], [mu11, mu02]].
  double tr = mu20 + mu02;
  double det_root =
      std::sqrt(std::max(0.0, (mu20 - mu02) * (mu20 - mu02) + 4.0 * mu11 * mu11));
  double lambda1 = 0.5 * (tr + det_root);
  double lambda2 = 0.5 * (tr - det_root);
  lambda2 = std::max(lambda2, 0.0);

  EllipseFit fit;
  fit.center_col = xc + refined.box.x;
  fit.center_row = yc + refined.box.y;
  fit.a = 2.0 * std::sqrt(lambda1);
  fit.b = 2.0 * std::sqrt(lambda2);
  if (fit.b <= 0.0) {
    throw DegenerateShape("mask is collinear; ellipse fit is degenerate");
  }
  // Image rows grow south, so negate mu11 to express the angle CCW from
  // east in the world frame.
  double theta = 0.5 * std::atan2(-2.0 * mu11, mu20 - mu02) *
                 (180.0 / std::numbers::pi);
  if (theta < 0.0) theta += 180.0;
  if (theta >= 180.0) theta -= 180.0;
  fit.theta_deg = theta;
  return fit;
}

RockTraits compute_traits(const RegisteredRock& rock, const GeoTransform& gt) {
  if (std::abs(gt.res_x - gt.res_y) > 1e-9 * gt.res_x) {
    throw DataError("trait computation expects square pixels");
  }
  const double res = gt.res_x;
  RefinedMask refined = refine_mask(rock.mask);
  EllipseFit fit = fit_ellipse(refined);

  RockTraits traits;
  traits.id = rock.id;
  traits.score = rock.score;
  traits.area_m2 = pixel_area_to_m2(refined.pixel_area, res);
  traits.major_axis_m = 2.0 * fit.a * res;
  traits.minor_axis_m = 2.0 * fit.b * res;
  traits.eccentricity =
      std::sqrt(std::max(0.0, 1.0 - (fit.b * fit.b) / (fit.a * fit.a)));
  traits.orientation_deg = fit.theta_deg;
  double azimuth = 90.0 - fit.theta_deg;
  if (azimuth < 0.0) azimuth += 180.0;
  traits.orientation_azimuth_deg = azimuth;
  traits.centroid_world =
      pixel_to_world(gt, {fit.center_col + 0.5, fit.center_row + 0.5});
  traits.exterior_contour = refined.exterior_contour;
  return traits;
}

}  // namespace rocktraits
