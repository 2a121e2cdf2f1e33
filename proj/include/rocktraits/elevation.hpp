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

#include <array>
#include <string>
#include <vector>

#include "rocktraits/raster.hpp"

namespace rocktraits {

// Piecewise-linear RGB colormap over [0, 1].
struct ColormapSpec {
  struct Breakpoint {
    double t;
    std::array<double, 3> rgb;
  };
  std::vector<Breakpoint> breakpoints;

  // Throws ConfigError unless t is strictly increasing from 0 to 1 and all
  // channels lie in [0, 1].
  void validate() const;
  std::array<double, 3> operator()(double t) const;
};

// The fixed jet colormap used by default: blue through cyan, yellow and red.
ColormapSpec jet_colormap();

// Loads {"breakpoints": [[t, r, g, b], ...]} from a JSON file.
ColormapSpec load_colormap(const std::string& path);

// Linear elevation window mapped onto [0, 1].
struct ElevationScale {
  double h_min = 0.0;
  double h_max = 1.0;
};

// clamp((h - h_min) / (h_max - h_min), 0, 1). Throws ConfigError when
// h_max <= h_min.
double scale_elevation(double h, const ElevationScale& scale);

// The scale window of a DEM band when none is configured: (min, max) over
// valid pixels. Throws DataError when the band has no valid pixels.
ElevationScale data_scale(const GeoRaster& dem, int band = 0);

// 3-band colormap encoding of a single-band DEM. Nodata pixels map to
// (0, 0, 0) and the output carries nodata = 0. The scale window used is
// recorded in the output metadata under "elev_window".
GeoRaster colormap_elevation(const GeoRaster& dem, const ElevationScale& scale,
                             const ColormapSpec& cmap);

// Per-pixel mean of the three colormap channels; collapses the 3-band
// encoding to one channel that keeps local variation but scrambles
// absolute elevation.
GeoRaster relative_elevation(const GeoRaster& d_rgb);

// Lossy 8-bit export of a [0, 1] float raster (round(v * 255)).
GeoRaster quantize_unit_raster(const GeoRaster& raster);

}  // namespace rocktraits
