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

#include "rocktraits/raster.hpp"

#include <cmath>
#include <cstring>

#include "rocktraits/errors.hpp"

namespace rocktraits {

const char* sample_type_name(SampleType t) {
  switch (t) {
    case SampleType::UInt8:
      return "uint8";
    case SampleType::UInt16:
      return "uint16";
    case SampleType::Float32:
      return "float32";
  }
  return "?";
}

std::size_t sample_type_bytes(SampleType t) {
  switch (t) {
    case SampleType::UInt8:
      return 1;
    case SampleType::UInt16:
      return 2;
    case SampleType::Float32:
      return 4;
  }
  return 0;
}

GeoRaster GeoRaster::create(int width, int height, int bands, SampleType type,
                            GeoTransform transform) {
  if (width < 1 || height < 1 || bands < 1) {
    throw ConfigError("raster dimensions and band count must be >= 1");
  }
  if (transform.res_x <= 0.0 || transform.res_y <= 0.0) {
    throw ConfigError("raster resolution must be positive");
  }
  GeoRaster r;
  r.width = width;
  r.height = height;
  r.type = type;
  r.transform = transform;
  r.bands.assign(static_cast<std::size_t>(bands),
                 std::vector<float>(r.samples_per_band(), 0.0f));
  return r;
}

std::optional<std::pair<double, double>> GeoRaster::band_range(
    int band) const {
  bool any = false;
  double lo = 0.0, hi = 0.0;
  for (float v : bands[static_cast<std::size_t>(band)]) {
    if (is_nodata(v) || std::isnan(v)) continue;
    if (!any) {
      lo = hi = v;
      any = true;
    } else {
      lo = std::min(lo, static_cast<double>(v));
      hi = std::max(hi, static_cast<double>(v));
    }
  }
  if (!any) return std::nullopt;
  return std::make_pair(lo, hi);
}

bool GeoRaster::same_content(const GeoRaster& other) const {
  if (width != other.width || height != other.height || type != other.type ||
      bands.size() != other.bands.size() || nodata != other.nodata ||
      metadata != other.metadata) {
    return false;
  }
  if (transform.origin_x != other.transform.origin_x ||
      transform.origin_y != other.transform.origin_y ||
      transform.res_x != other.transform.res_x ||
      transform.res_y != other.transform.res_y) {
    return false;
  }
  for (std::size_t b = 0; b < bands.size(); ++b) {
    // Bit-level compare so NaN payloads and signed zeros count too.
    if (std::memcmp(bands[b].data(), other.bands[b].data(),
                    bands[b].size() * sizeof(float)) != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace rocktraits
