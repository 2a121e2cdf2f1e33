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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rocktraits/geo.hpp"

namespace rocktraits {

// On-disk sample representation. Elevation products use Float32, spectral
// bands UInt8 or UInt16. All bands of a raster share one sample type.
enum class SampleType { UInt8, UInt16, Float32 };

const char* sample_type_name(SampleType t);
std::size_t sample_type_bytes(SampleType t);

// In-memory multi-band raster with georeference. Samples are held as float;
// integer-typed rasters keep integral values so file round trips are
// bit-exact. Immutable by convention once loaded (safe to share across
// threads); computed rasters are built by a single owner.
struct GeoRaster {
  int width = 0;
  int height = 0;
  SampleType type = SampleType::Float32;
  std::vector<std::vector<float>> bands;  // bands[b][row * width + col]
  std::optional<double> nodata;
  GeoTransform transform;
  // Free-form key=value metadata, persisted in the file (see docs/formats.md).
  std::map<std::string, std::string> metadata;

  int band_count() const { return static_cast<int>(bands.size()); }

  float at(int band, int col, int row) const {
    return bands[static_cast<std::size_t>(band)]
                [static_cast<std::size_t>(row) * width + col];
  }
  float& at(int band, int col, int row) {
    return bands[static_cast<std::size_t>(band)]
                [static_cast<std::size_t>(row) * width + col];
  }

  bool is_nodata(float v) const {
    return nodata.has_value() && static_cast<double>(v) == *nodata;
  }

  // Count of samples per band.
  std::size_t samples_per_band() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }

  // (min, max) over valid samples of one band; nullopt when all are nodata.
  std::optional<std::pair<double, double>> band_range(int band) const;

  static GeoRaster create(int width, int height, int bands, SampleType type,
                          GeoTransform transform);

  // Structural + sample equality (transform, nodata, metadata, bit-equal
  // samples). Used by round-trip tests.
  bool same_content(const GeoRaster& other) const;
};

}  // namespace rocktraits
