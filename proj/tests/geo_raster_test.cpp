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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "rocktraits/errors.hpp"
#include "rocktraits/geo.hpp"
#include "rocktraits/geotiff.hpp"
#include "rocktraits/rng.hpp"

using namespace rocktraits;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  fs::path dir = fs::temp_directory_path() / "rocktraits_geo_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("pixel/world mapping at the origin and a known offset") {
  GeoTransform gt{383000.0, 4150000.0, 0.02, 0.02};
  WorldPoint origin = pixel_to_world(gt, {0.0, 0.0});
  CHECK(origin.x == doctest::Approx(383000.0));
  CHECK(origin.y == doctest::Approx(4150000.0));

  // 100 * 0.02 = 2 m east, 50 * 0.02 = 1 m south.
  WorldPoint p = pixel_to_world(gt, {100.0, 50.0});
  CHECK(p.x == doctest::Approx(383002.0).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(4149999.0).epsilon(1e-12));
}

TEST_CASE("world_to_pixel inverts pixel_to_world over the raster extent") {
  GeoTransform gt{383000.0, 4150000.0, 0.02, 0.02};
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    PixelPoint p{rng.uniform(0.0, 25664.0), rng.uniform(0.0, 10589.0)};
    PixelPoint back = world_to_pixel(gt, pixel_to_world(gt, p));
    CHECK(std::abs(back.col - p.col) < 1e-9);
    CHECK(std::abs(back.row - p.row) < 1e-9);
  }
}

TEST_CASE("raster creation validates dimensions and resolution") {
  CHECK_THROWS_AS(GeoRaster::create(0, 5, 1, SampleType::Float32, {}),
                  ConfigError);
  CHECK_THROWS_AS(GeoRaster::create(5, 5, 0, SampleType::Float32, {}),
                  ConfigError);
  GeoTransform bad{0, 0, -1.0, 1.0};
  CHECK_THROWS_AS(GeoRaster::create(5, 5, 1, SampleType::Float32, bad),
                  ConfigError);
}

TEST_CASE("write/read round trip is bit exact for all sample types") {
  fs::path dir = temp_dir();
  Rng rng(11);
  for (SampleType type :
       {SampleType::UInt8, SampleType::UInt16, SampleType::Float32}) {
    for (bool deflate : {false, true}) {
      GeoRaster r = GeoRaster::create(37, 23, type == SampleType::UInt8 ? 5 : 2,
                                      type, {383000.0, 4150000.0, 0.02, 0.02});
      r.nodata = type == SampleType::Float32 ? -9999.25 : 0.0;
      r.metadata["elev_window"] = "1200,1230";
      for (auto& band : r.bands) {
        for (float& v : band) {
          switch (type) {
            case SampleType::UInt8:
              v = static_cast<float>(rng.next_below(256));
              break;
            case SampleType::UInt16:
              v = static_cast<float>(rng.next_below(65536));
              break;
            case SampleType::Float32:
              v = static_cast<float>(rng.uniform(-2000.0, 2000.0));
              break;
          }
        }
      }
      fs::path file = dir / ("roundtrip_" + std::string(sample_type_name(type)) +
                             (deflate ? "_z.tif" : "_raw.tif"));
      write_raster(r, file.string(), {.deflate = deflate});
      GeoRaster back = read_raster(file.string());
      CHECK(back.same_content(r));
    }
  }
}

TEST_CASE("1x1 raster and nodata sentinel survive a round trip") {
  fs::path file = temp_dir() / "tiny.tif";
  GeoRaster r = GeoRaster::create(1, 1, 1, SampleType::Float32,
                                  {10.0, 20.0, 0.5, 0.5});
  r.nodata = -1.5;
  r.at(0, 0, 0) = -1.5f;
  write_raster(r, file.string());
  GeoRaster back = read_raster(file.string());
  CHECK(back.same_content(r));
  CHECK(back.is_nodata(back.at(0, 0, 0)));
}

TEST_CASE("five-band raster keeps band order") {
  fs::path file = temp_dir() / "bands.tif";
  GeoRaster r = GeoRaster::create(8, 4, 5, SampleType::UInt16,
                                  {0.0, 100.0, 0.02, 0.02});
  for (int b = 0; b < 5; ++b) {
    for (int row = 0; row < 4; ++row) {
      for (int col = 0; col < 8; ++col) {
        r.at(b, col, row) = static_cast<float>(b * 1000 + row * 8 + col);
      }
    }
  }
  write_raster(r, file.string());
  GeoRaster back = read_raster(file.string());
  REQUIRE(back.band_count() == 5);
  for (int b = 0; b < 5; ++b) {
    CHECK(back.at(b, 3, 2) == doctest::Approx(b * 1000 + 2 * 8 + 3));
  }
}

TEST_CASE("reading a file without georeference tags raises") {
  // A plain TIFF written by hand: strip the geo tags by writing with a
  // zeroed transform is not enough, so build a minimal TIFF body instead.
  fs::path file = temp_dir() / "nogeo.tif";
  {
    // Header + IFD with just width/height/strip tags (uint8, 1x1, raw).
    std::vector<std::uint8_t> bytes = {
        'I', 'I', 42, 0, 8, 0, 0, 0,  // header, IFD at 8
        5, 0,                          // five entries
        // ImageWidth = 1
        0x00, 0x01, 3, 0, 1, 0, 0, 0, 1, 0, 0, 0,
        // ImageLength = 1
        0x01, 0x01, 3, 0, 1, 0, 0, 0, 1, 0, 0, 0,
        // BitsPerSample = 8
        0x02, 0x01, 3, 0, 1, 0, 0, 0, 8, 0, 0, 0,
        // StripOffsets = 74
        0x11, 0x01, 4, 0, 1, 0, 0, 0, 74, 0, 0, 0,
        // StripByteCounts = 1
        0x19, 0x01, 4, 0, 1, 0, 0, 0, 1, 0, 0, 0,
        0, 0, 0, 0,  // next IFD
        0x7f         // the single sample
    };
    std::ofstream out(file, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }
  CHECK_THROWS_AS(read_raster(file.string()), GeoreferenceMissing);
}

TEST_CASE("missing files and junk bytes raise DataError") {
  CHECK_THROWS_AS(read_raster("/nonexistent/file.tif"), DataError);
  fs::path file = temp_dir() / "junk.tif";
  {
    std::ofstream out(file, std::ios::binary);
    out << "not a tiff at all";
  }
  CHECK_THROWS_AS(read_raster(file.string()), DataError);
}

TEST_CASE("band_range skips nodata samples") {
  GeoRaster r = GeoRaster::create(2, 2, 1, SampleType::Float32, {0, 0, 1, 1});
  r.nodata = -9999.0;
  r.at(0, 0, 0) = -9999.0f;
  r.at(0, 1, 0) = 3.0f;
  r.at(0, 0, 1) = 7.0f;
  r.at(0, 1, 1) = 5.0f;
  auto range = r.band_range(0);
  REQUIRE(range.has_value());
  CHECK(range->first == doctest::Approx(3.0));
  CHECK(range->second == doctest::Approx(7.0));
}
