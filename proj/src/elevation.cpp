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

#include "rocktraits/elevation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "rocktraits/errors.hpp"

namespace rocktraits {

void ColormapSpec::validate() const {
  if (breakpoints.size() < 2) {
    throw ConfigError("colormap needs at least two breakpoints");
  }
  if (breakpoints.front().t != 0.0 || breakpoints.back().t != 1.0) {
    throw ConfigError("colormap breakpoints must start at 0 and end at 1");
  }
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (i > 0 && !(breakpoints[i].t > breakpoints[i - 1].t)) {
      throw ConfigError("colormap breakpoints must be strictly increasing");
    }
    for (double c : breakpoints[i].rgb) {
      if (!(c >= 0.0 && c <= 1.0)) {
        throw ConfigError("colormap channels must lie in [0, 1]");
      }
    }
  }
}

std::array<double, 3> ColormapSpec::operator()(double t) const {
  t = std::clamp(t, 0.0, 1.0);
  std::size_t hi = 1;
  while (hi + 1 < breakpoints.size() && breakpoints[hi].t < t) ++hi;
  const Breakpoint& a = breakpoints[hi - 1];
  const Breakpoint& b = breakpoints[hi];
  if (t <= a.t) return a.rgb;
  if (t >= b.t) return b.rgb;
  double u = (t - a.t) / (b.t - a.t);
  return {a.rgb[0] + u * (b.rgb[0] - a.rgb[0]),
          a.rgb[1] + u * (b.rgb[1] - a.rgb[1]),
          a.rgb[2] + u * (b.rgb[2] - a.rgb[2])};
}

ColormapSpec jet_colormap() {
  ColormapSpec jet;
  jet.breakpoints = {
      {0.0, {0.0, 0.0, 0.5}},   {0.125, {0.0, 0.0, 1.0}},
      {0.375, {0.0, 1.0, 1.0}}, {0.625, {1.0, 1.0, 0.0}},
      {0.875, {1.0, 0.0, 0.0}}, {1.0, {0.5, 0.0, 0.0}},
  };
  return jet;
}

ColormapSpec load_colormap(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open colormap file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("colormap file " + path + ": " + e.what());
  }
  if (!j.contains("breakpoints") || !j["breakpoints"].is_array()) {
    throw ConfigError("colormap file needs a breakpoints array");
  }
  ColormapSpec spec;
  for (const auto& bp : j["breakpoints"]) {
    if (!bp.is_array() || bp.size() != 4) {
      throw ConfigError("colormap breakpoints must be [t, r, g, b] arrays");
    }
    spec.breakpoints.push_back(
        {bp[0].get<double>(),
         {bp[1].get<double>(), bp[2].get<double>(), bp[3].get<double>()}});
  }
  spec.validate();
  return spec;
}

double scale_elevation(double h, const ElevationScale& scale) {
  if (!(scale.h_max > scale.h_min)) {
    throw ConfigError("elevation scale window must have h_max > h_min");
  }
  return std::clamp((h - scale.h_min) / (scale.h_max - scale.h_min), 0.0, 1.0);
}

ElevationScale data_scale(const GeoRaster& dem, int band) {
  auto range = dem.band_range(band);
  if (!range) throw DataError("DEM band has no valid samples");
  if (!(range->second > range->first)) {
    throw DataError("DEM band is constant; elevation window is degenerate");
  }
  return {range->first, range->second};
}

namespace {

std::string format_window(const ElevationScale& scale) {
  char buf[80];
  char* p = buf;
  auto res = std::to_chars(p, buf + sizeof buf, scale.h_min);
  p = res.ptr;
  *p++ = ',';
  res = std::to_chars(p, buf + sizeof buf, scale.h_max);
  return std::string(buf, res.ptr);
}

}  // namespace

GeoRaster colormap_elevation(const GeoRaster& dem, const ElevationScale& scale,
                             const ColormapSpec& cmap) {
  if (dem.band_count() != 1) {
    throw DataError("colormap encoding expects a single-band DEM");
  }
  if (!(scale.h_max > scale.h_min)) {
    throw ConfigError("elevation scale window must have h_max > h_min");
  }
  cmap.validate();
  GeoRaster out = GeoRaster::create(dem.width, dem.height, 3,
                                    SampleType::Float32, dem.transform);
  out.nodata = 0.0;
  out.metadata = dem.metadata;
  out.metadata["elev_window"] = format_window(scale);
  const auto& h = dem.bands[0];
  for (std::size_t i = 0; i < h.size(); ++i) {
    float v = h[i];
    if (dem.is_nodata(v) || std::isnan(v)) {
      out.bands[0][i] = out.bands[1][i] = out.bands[2][i] = 0.0f;
      continue;
    }
    auto rgb = cmap(scale_elevation(v, scale));
    out.bands[0][i] = static_cast<float>(rgb[0]);
    out.bands[1][i] = static_cast<float>(rgb[1]);
    out.bands[2][i] = static_cast<float>(rgb[2]);
  }
  return out;
}

GeoRaster relative_elevation(const GeoRaster& d_rgb) {
  if (d_rgb.band_count() != 3) {
    throw DataError("relative elevation expects exactly 3 bands, got " +
                    std::to_string(d_rgb.band_count()));
  }
  GeoRaster out = GeoRaster::create(d_rgb.width, d_rgb.height, 1,
                                    SampleType::Float32, d_rgb.transform);
  out.nodata = d_rgb.nodata;
  out.metadata = d_rgb.metadata;
  const auto& r = d_rgb.bands[0];
  const auto& g = d_rgb.bands[1];
  const auto& b = d_rgb.bands[2];
  for (std::size_t i = 0; i < r.size(); ++i) {
    out.bands[0][i] = static_cast<float>(
        (static_cast<double>(r[i]) + g[i] + b[i]) / 3.0);
  }
  return out;
}

GeoRaster quantize_unit_raster(const GeoRaster& raster) {
  GeoRaster out =
      GeoRaster::create(raster.width, raster.height, raster.band_count(),
                        SampleType::UInt8, raster.transform);
  out.metadata = raster.metadata;
  for (int b = 0; b < raster.band_count(); ++b) {
    for (std::size_t i = 0; i < raster.bands[b].size(); ++i) {
      double v = std::clamp(static_cast<double>(raster.bands[b][i]), 0.0, 1.0);
      out.bands[b][i] = static_cast<float>(std::lround(v * 255.0));
    }
  }
  return out;
}

}  // namespace rocktraits
