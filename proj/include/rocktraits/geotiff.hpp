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

#include "rocktraits/raster.hpp"

namespace rocktraits {

// GeoTIFF subset codec. Supported on read: classic little-endian TIFF,
// strip- or tile-organized, uncompressed or deflate, chunky planar layout,
// uint8/uint16/float32 samples, georeference from ModelPixelScale +
// ModelTiepoint, nodata from the GDAL_NODATA ASCII tag. Tag list in
// docs/formats.md. Files without georeference tags raise GeoreferenceMissing;
// rotated geotransforms (ModelTransformation) are rejected.
GeoRaster read_raster(const std::string& path);

struct WriteOptions {
  bool deflate = true;  // zlib-compressed strips; false writes raw strips
};

// Writes a strip-organized GeoTIFF readable by read_raster with bit-equal
// samples. Existing files are overwritten.
void write_raster(const GeoRaster& raster, const std::string& path,
                  const WriteOptions& options = {});

}  // namespace rocktraits
