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

#include "rocktraits/scarp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "rocktraits/errors.hpp"
#include "rocktraits/registration.hpp"

namespace rocktraits {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr float kSlopeNodata = -9999.0f;

}  // namespace

GeoRaster horn_slope(const GeoRaster& dem, double cell) {
  if (dem.band_count() != 1) {
    throw DataError("slope expects a single-band DEM");
  }
  if (!(cell > 0.0)) throw ConfigError("cell size must be positive");
  GeoRaster out = GeoRaster::create(dem.width, dem.height, 1,
                                    SampleType::Float32, dem.transform);
  const double sentinel =
      dem.nodata.has_value() ? *dem.nodata : kSlopeNodata;
  out.nodata = sentinel;
  const auto& z = dem.bands[0];
  const int w = dem.width;
  const int h = dem.height;
  auto sample = [&](int c, int r) -> float {
    c = std::clamp(c, 0, w - 1);
    r = std::clamp(r, 0, h - 1);
    return z[static_cast<std::size_t>(r) * w + c];
  };
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      bool bad = false;
      double win[3][3];
      for (int dr = -1; dr <= 1 && !bad; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          float v = sample(c + dc, r + dr);
          if (dem.is_nodata(v) || std::isnan(v)) {
            bad = true;
            break;
          }
          win[dr + 1][dc + 1] = v;
        }
      }
      if (bad) {
        out.at(0, c, r) = static_cast<float>(sentinel);
        continue;
      }
      // Horn weights 1,2,1 across the 3x3 window, normalized by 8*cell.
      double gx = ((win[0][2] + 2.0 * win[1][2] + win[2][2]) -
                   (win[0][0] + 2.0 * win[1][0] + win[2][0])) /
                  (8.0 * cell);
      double gy = ((win[2][0] + 2.0 * win[2][1] + win[2][2]) -
                   (win[0][0] + 2.0 * win[0][1] + win[0][2])) /
                  (8.0 * cell);
      out.at(0, c, r) = static_cast<float>(
          std::atan(std::sqrt(gx * gx + gy * gy)) * kRadToDeg);
    }
  }
  return out;
}

GeoRaster gaussian_smooth(const GeoRaster& raster, double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian sigma must be positive");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    sum += kernel[i + radius];
  }
  for (double& k : kernel) k /= sum;

  GeoRaster out = raster;
  const int w = raster.width;
  const int h = raster.height;
  // Symmetric reflection: index -1 maps to 0, -2 to 1, ...
  auto reflect = [](int i, int n) {
    while (i < 0 || i >= n) {
      if (i < 0) i = -i - 1;
      if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
  };
  for (int b = 0; b < raster.band_count(); ++b) {
    std::vector<float> tmp(raster.bands[b].size());
    const auto& src = out.bands[b];
    // Horizontal pass.
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        float center = src[static_cast<std::size_t>(r) * w + c];
        if (raster.is_nodata(center) || std::isnan(center)) {
          tmp[static_cast<std::size_t>(r) * w + c] = center;
          continue;
        }
        double acc = 0.0, norm = 0.0;
        for (int k = -radius; k <= radius; ++k) {
          int cc = reflect(c + k, w);
          float v = src[static_cast<std::size_t>(r) * w + cc];
          if (raster.is_nodata(v) || std::isnan(v)) continue;
          acc += kernel[k + radius] * v;
          norm += kernel[k + radius];
        }
        tmp[static_cast<std::size_t>(r) * w + c] =
            norm > 0.0 ? static_cast<float>(acc / norm) : center;
      }
    }
    // Vertical pass.
    auto& dst = out.bands[b];
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        float center = tmp[static_cast<std::size_t>(r) * w + c];
        if (raster.is_nodata(center) || std::isnan(center)) {
          dst[static_cast<std::size_t>(r) * w + c] = center;
          continue;
        }
        double acc = 0.0, norm = 0.0;
        for (int k = -radius; k <= radius; ++k) {
          int rr = reflect(r + k, h);
          float v = tmp[static_cast<std::size_t>(rr) * w + c];
          if (raster.is_nodata(v) || std::isnan(v)) continue;
          acc += kernel[k + radius] * v;
          norm += kernel[k + radius];
        }
        dst[static_cast<std::size_t>(r) * w + c] =
            norm > 0.0 ? static_cast<float>(acc / norm) : center;
      }
    }
  }
  return out;
}

std::optional<ScarpModel> extract_scarp(const GeoRaster& slope,
                                        double slope_threshold_deg,
                                        const MorphParams& morph) {
  if (slope.band_count() != 1) {
    throw DataError("scarp extraction expects a single-band slope raster");
  }
  if (!(slope_threshold_deg > 0.0 && slope_threshold_deg < 90.0)) {
    throw ConfigError("slope threshold must lie in (0, 90) degrees");
  }
  Mask mask(slope.width, slope.height);
  const auto& s = slope.bands[0];
  for (std::size_t i = 0; i < s.size(); ++i) {
    float v = s[i];
    if (slope.is_nodata(v) || std::isnan(v)) continue;
    mask.data[i] = v >= slope_threshold_deg ? 1 : 0;
  }
  if (mask.area() == 0) return std::nullopt;

  mask = morph_open(mask, morph.open_radius);
  mask = morph_close(mask, morph.close_radius);
  if (mask.area() == 0) return std::nullopt;

  auto [labels, count] = label_components(mask);
  std::vector<std::uint64_t> sizes(static_cast<std::size_t>(count) + 1, 0);
  for (int l : labels) {
    if (l > 0) ++sizes[static_cast<std::size_t>(l)];
  }
  int largest = 1;
  for (int l = 2; l <= count; ++l) {
    if (sizes[static_cast<std::size_t>(l)] >
        sizes[static_cast<std::size_t>(largest)]) {
      largest = l;
    }
  }
  mask = fill_holes(component_mask(mask, labels, largest));

  ScarpModel model;
  model.transform = slope.transform;
  model.mask = std::move(mask);
  for (Contour& contour : trace_contours(model.mask)) {
    if (!contour.is_hole) {
      model.contour = std::move(contour.points);
      break;
    }
  }
  return model;
}

namespace {

// Longest 8-connected path through the skeleton via double BFS; returns the
// pixel sequence. Spur branches off the main path are ignored.
std::vector<ContourPoint> longest_path(const Mask& skeleton) {
  const int w = skeleton.width;
  const int h = skeleton.height;
  std::vector<ContourPoint> pixels;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (skeleton.at(c, r)) pixels.push_back({c, r});
    }
  }
  if (pixels.empty()) return {};
  if (pixels.size() == 1) return pixels;

  auto index = [&](int c, int r) {
    return static_cast<std::size_t>(r) * w + c;
  };
  auto bfs = [&](ContourPoint start, std::vector<int>* parents) {
    std::vector<int> dist(static_cast<std::size_t>(w) * h, -1);
    if (parents) parents->assign(static_cast<std::size_t>(w) * h, -1);
    std::deque<ContourPoint> queue{start};
    dist[index(start.col, start.row)] = 0;
    ContourPoint far = start;
    int far_dist = 0;
    while (!queue.empty()) {
      ContourPoint p = queue.front();
      queue.pop_front();
      int d = dist[index(p.col, p.row)];
      if (d > far_dist) {
        far_dist = d;
        far = p;
      }
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          int nc = p.col + dc, nr = p.row + dr;
          if (nc < 0 || nc >= w || nr < 0 || nr >= h) continue;
          if (!skeleton.at(nc, nr)) continue;
          if (dist[index(nc, nr)] != -1) continue;
          dist[index(nc, nr)] = d + 1;
          if (parents) {
            (*parents)[index(nc, nr)] = static_cast<int>(index(p.col, p.row));
          }
          queue.push_back({nc, nr});
        }
      }
    }
    return far;
  };

  ContourPoint end1 = bfs(pixels.front(), nullptr);
  std::vector<int> parents;
  ContourPoint end2 = bfs(end1, &parents);
  std::vector<ContourPoint> path;
  int cur = static_cast<int>(index(end2.col, end2.row));
  while (cur >= 0) {
    path.push_back({cur % w, cur / w});
    cur = parents[static_cast<std::size_t>(cur)];
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

StrikeFit strike_line(const Mask& skeleton, double subsection,
                      const GeoTransform& gt) {
  if (!(subsection > 0.0 && subsection <= 1.0)) {
    throw ConfigError("strike subsection fraction must lie in (0, 1]");
  }
  std::vector<ContourPoint> path = longest_path(skeleton);
  if (path.size() < 2) {
    throw DataError("skeleton has fewer than 2 pixels; cannot fit a strike");
  }

  // Arc length along the path (diagonal steps sqrt(2)).
  std::vector<double> arc(path.size(), 0.0);
  for (std::size_t i = 1; i < path.size(); ++i) {
    int dc = path[i].col - path[i - 1].col;
    int dr = path[i].row - path[i - 1].row;
    arc[i] = arc[i - 1] + ((dc != 0 && dr != 0) ? std::numbers::sqrt2 : 1.0);
  }
  double total = arc.back();
  double lo = total * (0.5 - subsection / 2.0);
  double hi = total * (0.5 + subsection / 2.0);
  std::vector<ContourPoint> section;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (arc[i] >= lo && arc[i] <= hi) section.push_back(path[i]);
  }
  if (section.size() < 2) section = path;

  // Principal axis of the section in world coordinates. Pixel centers and
  // the row flip to north-up both matter for the returned direction.
  double mx = 0.0, my = 0.0;
  std::vector<std::pair<double, double>> pts;
  pts.reserve(section.size());
  for (const ContourPoint& p : section) {
    WorldPoint wpt = pixel_to_world(gt, {p.col + 0.5, p.row + 0.5});
    pts.emplace_back(wpt.x, wpt.y);
    mx += wpt.x;
    my += wpt.y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0 && sxy == 0.0 && syy == 0.0) {
    throw DataError("strike subsection points are coincident");
  }
  // Leading eigenvector of [[sxx, sxy], [sxy, syy]].
  double angle = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  std::pair<double, double> strike{std::cos(angle), std::sin(angle)};
  // Deterministic sign: dominant component positive.
  if ((std::abs(strike.first) >= std::abs(strike.second) &&
       strike.first < 0.0) ||
      (std::abs(strike.second) > std::abs(strike.first) &&
       strike.second < 0.0)) {
    strike = {-strike.first, -strike.second};
  }

  StrikeFit fit;
  fit.strike = strike;
  fit.cross_strike = {-strike.second, strike.first};
  double ac = 0.0, ar = 0.0;
  for (const ContourPoint& p : section) {
    ac += p.col;
    ar += p.row;
  }
  fit.anchor_px = {ac / static_cast<double>(section.size()),
                   ar / static_cast<double>(section.size())};
  return fit;
}

std::optional<ScarpModel> build_scarp_model(const GeoRaster& dem,
                                            const ScarpParams& params) {
  if (std::abs(dem.transform.res_x - dem.transform.res_y) >
      1e-9 * dem.transform.res_x) {
    throw DataError("scarp extraction expects square pixels");
  }
  GeoRaster slope = horn_slope(dem, dem.transform.res_x);
  slope = gaussian_smooth(slope, params.gaussian_sigma_px);
  auto model = extract_scarp(slope, params.slope_threshold_deg, params.morph);
  if (!model) return std::nullopt;
  model->skeleton = skeletonize(model->mask);
  StrikeFit fit = strike_line(model->skeleton, params.subsection,
                              model->transform);
  model->strike = fit.strike;
  model->cross_strike = fit.cross_strike;
  model->strike_anchor_px = fit.anchor_px;
  return model;
}

std::vector<int> filter_rocks(const RockRegistry& registry,
                              const ScarpModel& scarp) {
  std::vector<int> kept;
  for (const auto& [id, rock] : registry.rocks()) {
    if (rock.mask.empty()) continue;
    auto [cx, cy] = rock.mask.centroid();
    int c = static_cast<int>(std::lround(cx));
    int r = static_cast<int>(std::lround(cy));
    if (scarp.mask.in_bounds(c, r) && scarp.mask.at(c, r)) {
      kept.push_back(id);
    }
  }
  return kept;
}

}  // namespace rocktraits
