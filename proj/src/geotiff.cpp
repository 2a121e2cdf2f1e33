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

#include "rocktraits/geotiff.hpp"

#include <zlib.h>

#include <array>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <vector>

#include "rocktraits/errors.hpp"

namespace rocktraits {

namespace {

// Tag ids used by the subset (full list in docs/formats.md).
constexpr std::uint16_t kTagImageWidth = 256;
constexpr std::uint16_t kTagImageLength = 257;
constexpr std::uint16_t kTagBitsPerSample = 258;
constexpr std::uint16_t kTagCompression = 259;
constexpr std::uint16_t kTagPhotometric = 262;
constexpr std::uint16_t kTagImageDescription = 270;
constexpr std::uint16_t kTagStripOffsets = 273;
constexpr std::uint16_t kTagSamplesPerPixel = 277;
constexpr std::uint16_t kTagRowsPerStrip = 278;
constexpr std::uint16_t kTagStripByteCounts = 279;
constexpr std::uint16_t kTagPlanarConfig = 284;
constexpr std::uint16_t kTagPredictor = 317;
constexpr std::uint16_t kTagTileWidth = 322;
constexpr std::uint16_t kTagTileLength = 323;
constexpr std::uint16_t kTagTileOffsets = 324;
constexpr std::uint16_t kTagTileByteCounts = 325;
constexpr std::uint16_t kTagSampleFormat = 339;
constexpr std::uint16_t kTagModelPixelScale = 33550;
constexpr std::uint16_t kTagModelTiepoint = 33922;
constexpr std::uint16_t kTagModelTransformation = 34264;
constexpr std::uint16_t kTagGdalNodata = 42113;

constexpr std::uint16_t kCompressionNone = 1;
constexpr std::uint16_t kCompressionDeflateAdobe = 8;
constexpr std::uint16_t kCompressionDeflateLegacy = 32946;

constexpr std::uint16_t kTypeByte = 1;
constexpr std::uint16_t kTypeAscii = 2;
constexpr std::uint16_t kTypeShort = 3;
constexpr std::uint16_t kTypeLong = 4;
constexpr std::uint16_t kTypeRational = 5;
constexpr std::uint16_t kTypeDouble = 12;

std::size_t type_size(std::uint16_t type) {
  switch (type) {
    case kTypeByte:
    case kTypeAscii:
      return 1;
    case kTypeShort:
      return 2;
    case kTypeLong:
      return 4;
    case kTypeRational:
      return 8;
    case kTypeDouble:
      return 8;
    default:
      return 0;
  }
}

struct Entry {
  std::uint16_t type = 0;
  std::vector<double> numbers;
  std::string text;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : path_(path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open raster file: " + path);
    bytes_.assign(std::istreambuf_iterator<char>(in),
                  std::istreambuf_iterator<char>());
  }

  GeoRaster run() {
    if (bytes_.size() < 8) throw DataError(path_ + ": not a TIFF file");
    if (bytes_[0] == 'M' && bytes_[1] == 'M') {
      throw DataError(path_ + ": big-endian TIFF is not supported");
    }
    if (bytes_[0] != 'I' || bytes_[1] != 'I') {
      throw DataError(path_ + ": not a TIFF file");
    }
    std::uint16_t magic = u16(2);
    if (magic == 43) throw DataError(path_ + ": BigTIFF is not supported");
    if (magic != 42) throw DataError(path_ + ": not a TIFF file");
    parse_ifd(u32(4));
    return build();
  }

 private:
  std::uint16_t u16(std::size_t off) const {
    check(off, 2);
    return static_cast<std::uint16_t>(bytes_[off] | (bytes_[off + 1] << 8));
  }
  std::uint32_t u32(std::size_t off) const {
    check(off, 4);
    return static_cast<std::uint32_t>(bytes_[off]) |
           (static_cast<std::uint32_t>(bytes_[off + 1]) << 8) |
           (static_cast<std::uint32_t>(bytes_[off + 2]) << 16) |
           (static_cast<std::uint32_t>(bytes_[off + 3]) << 24);
  }
  double f64(std::size_t off) const {
    check(off, 8);
    std::uint64_t u = 0;
    for (int i = 7; i >= 0; --i) u = (u << 8) | bytes_[off + i];
    double d;
    std::memcpy(&d, &u, 8);
    return d;
  }
  void check(std::size_t off, std::size_t n) const {
    if (off + n > bytes_.size()) {
      throw DataError(path_ + ": truncated TIFF structure");
    }
  }

  void parse_ifd(std::uint32_t ifd_off) {
    std::uint16_t n = u16(ifd_off);
    for (std::uint16_t i = 0; i < n; ++i) {
      std::size_t e = ifd_off + 2 + static_cast<std::size_t>(i) * 12;
      std::uint16_t tag = u16(e);
      std::uint16_t type = u16(e + 2);
      std::uint32_t count = u32(e + 4);
      std::size_t sz = type_size(type);
      if (sz == 0) continue;  // unknown value type; tag is skipped
      std::size_t total = sz * count;
      std::size_t value_off = total <= 4 ? e + 8 : u32(e + 8);
      check(value_off, total);

      Entry entry;
      entry.type = type;
      if (type == kTypeAscii) {
        entry.text.assign(reinterpret_cast<const char*>(&bytes_[value_off]),
                          count);
        while (!entry.text.empty() && entry.text.back() == '\0') {
          entry.text.pop_back();
        }
      } else {
        entry.numbers.reserve(count);
        for (std::uint32_t k = 0; k < count; ++k) {
          std::size_t o = value_off + static_cast<std::size_t>(k) * sz;
          switch (type) {
            case kTypeByte:
              entry.numbers.push_back(bytes_[o]);
              break;
            case kTypeShort:
              entry.numbers.push_back(u16(o));
              break;
            case kTypeLong:
              entry.numbers.push_back(u32(o));
              break;
            case kTypeRational:
              entry.numbers.push_back(u32(o + 4) != 0
                                          ? static_cast<double>(u32(o)) /
                                                static_cast<double>(u32(o + 4))
                                          : 0.0);
              break;
            case kTypeDouble:
              entry.numbers.push_back(f64(o));
              break;
            default:
              break;
          }
        }
      }
      entries_[tag] = std::move(entry);
    }
  }

  const Entry* find(std::uint16_t tag) const {
    auto it = entries_.find(tag);
    return it == entries_.end() ? nullptr : &it->second;
  }

  double scalar(std::uint16_t tag, double fallback) const {
    const Entry* e = find(tag);
    if (!e || e->numbers.empty()) return fallback;
    return e->numbers[0];
  }

  GeoRaster build() {
    const Entry* we = find(kTagImageWidth);
    const Entry* he = find(kTagImageLength);
    if (!we || !he) throw DataError(path_ + ": missing image dimensions");
    int width = static_cast<int>(we->numbers.at(0));
    int height = static_cast<int>(he->numbers.at(0));
    if (width < 1 || height < 1) {
      throw DataError(path_ + ": bad image dimensions");
    }

    int samples = static_cast<int>(scalar(kTagSamplesPerPixel, 1));
    int planar = static_cast<int>(scalar(kTagPlanarConfig, 1));
    if (planar != 1) {
      throw DataError(path_ + ": only chunky planar configuration supported");
    }
    int predictor = static_cast<int>(scalar(kTagPredictor, 1));
    if (predictor != 1) {
      throw DataError(path_ + ": TIFF predictor not supported");
    }

    int bits = 8;
    if (const Entry* be = find(kTagBitsPerSample)) {
      bits = static_cast<int>(be->numbers.at(0));
      for (double b : be->numbers) {
        if (static_cast<int>(b) != bits) {
          throw DataError(path_ + ": mixed bits-per-sample not supported");
        }
      }
    }
    int fmt = 1;
    if (const Entry* fe = find(kTagSampleFormat)) {
      fmt = static_cast<int>(fe->numbers.at(0));
      for (double f : fe->numbers) {
        if (static_cast<int>(f) != fmt) {
          throw DataError(path_ + ": mixed sample formats not supported");
        }
      }
    }
    SampleType type;
    if (bits == 8 && fmt == 1) {
      type = SampleType::UInt8;
    } else if (bits == 16 && fmt == 1) {
      type = SampleType::UInt16;
    } else if (bits == 32 && fmt == 3) {
      type = SampleType::Float32;
    } else {
      throw DataError(path_ + ": unsupported sample type (bits=" +
                      std::to_string(bits) + ", format=" +
                      std::to_string(fmt) + ")");
    }

    int compression = static_cast<int>(scalar(kTagCompression, 1));
    if (compression != kCompressionNone &&
        compression != kCompressionDeflateAdobe &&
        compression != kCompressionDeflateLegacy) {
      throw DataError(path_ + ": unsupported compression " +
                      std::to_string(compression));
    }
    bool deflate = compression != kCompressionNone;

    // Georeference: require pixel scale + tiepoint; a transformation matrix
    // implies rotation or shear, which this subset rejects.
    if (find(kTagModelTransformation)) {
      throw DataError(path_ +
                      ": ModelTransformation (rotated geotransform) rejected; "
                      "north-up pixel-scale rasters only");
    }
    const Entry* scale = find(kTagModelPixelScale);
    const Entry* tie = find(kTagModelTiepoint);
    if (!scale || !tie) {
      throw GeoreferenceMissing(
          path_ + ": no ModelPixelScale/ModelTiepoint georeference tags");
    }
    if (scale->numbers.size() < 2 || tie->numbers.size() < 6) {
      throw GeoreferenceMissing(path_ + ": malformed georeference tags");
    }
    GeoTransform gt;
    gt.res_x = scale->numbers[0];
    gt.res_y = scale->numbers[1];
    if (!(gt.res_x > 0.0) || !(gt.res_y > 0.0)) {
      throw DataError(path_ + ": non-positive pixel scale");
    }
    // Tiepoint maps raster point (i, j) to world (X, Y).
    gt.origin_x = tie->numbers[3] - tie->numbers[0] * gt.res_x;
    gt.origin_y = tie->numbers[4] + tie->numbers[1] * gt.res_y;

    GeoRaster raster = GeoRaster::create(width, height, samples, type, gt);

    if (const Entry* nd = find(kTagGdalNodata)) {
      double v = 0.0;
      const char* b = nd->text.c_str();
      auto [p, ec] = std::from_chars(b, b + nd->text.size(), v);
      if (ec == std::errc()) raster.nodata = v;
    }
    if (const Entry* desc = find(kTagImageDescription)) {
      parse_metadata(desc->text, raster.metadata);
    }

    if (find(kTagTileOffsets)) {
      read_tiled(raster, deflate);
    } else {
      read_striped(raster, deflate);
    }
    return raster;
  }

  static void parse_metadata(const std::string& text,
                             std::map<std::string, std::string>& out) {
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string::npos) end = text.size();
      std::string line = text.substr(pos, end - pos);
      std::size_t eq = line.find('=');
      if (eq != std::string::npos && eq > 0) {
        out[line.substr(0, eq)] = line.substr(eq + 1);
      }
      pos = end + 1;
    }
  }

  std::vector<std::uint8_t> chunk_bytes(std::size_t offset, std::size_t count,
                                        bool deflate,
                                        std::size_t expected) const {
    check(offset, count);
    if (!deflate) {
      if (count < expected) throw DataError(path_ + ": short TIFF chunk");
      return {bytes_.begin() + offset, bytes_.begin() + offset + expected};
    }
    std::vector<std::uint8_t> out(expected);
    uLongf dest_len = expected;
    int rc = uncompress(out.data(), &dest_len, &bytes_[offset], count);
    if (rc != Z_OK || dest_len != expected) {
      throw DataError(path_ + ": deflate chunk decode failed");
    }
    return out;
  }

  void scatter(GeoRaster& raster, const std::vector<std::uint8_t>& data,
               int x0, int y0, int w, int h, int row_stride_px) const {
    const int bands = raster.band_count();
    const std::size_t bpp = sample_type_bytes(raster.type);
    for (int r = 0; r < h; ++r) {
      int ry = y0 + r;
      if (ry >= raster.height) break;
      for (int c = 0; c < w; ++c) {
        int rx = x0 + c;
        if (rx >= raster.width) break;
        std::size_t src =
            (static_cast<std::size_t>(r) * row_stride_px + c) * bands * bpp;
        for (int b = 0; b < bands; ++b) {
          const std::uint8_t* p = data.data() + src + b * bpp;
          float v = 0.0f;
          switch (raster.type) {
            case SampleType::UInt8:
              v = *p;
              break;
            case SampleType::UInt16:
              v = static_cast<float>(p[0] | (p[1] << 8));
              break;
            case SampleType::Float32: {
              std::uint32_t u = static_cast<std::uint32_t>(p[0]) |
                                (static_cast<std::uint32_t>(p[1]) << 8) |
                                (static_cast<std::uint32_t>(p[2]) << 16) |
                                (static_cast<std::uint32_t>(p[3]) << 24);
              std::memcpy(&v, &u, 4);
              break;
            }
          }
          raster.at(b, rx, ry) = v;
        }
      }
    }
  }

  void read_striped(GeoRaster& raster, bool deflate) const {
    const Entry* offs = find(kTagStripOffsets);
    const Entry* cnts = find(kTagStripByteCounts);
    if (!offs || !cnts) throw DataError(path_ + ": missing strip layout tags");
    long rows_per_strip =
        static_cast<long>(scalar(kTagRowsPerStrip, raster.height));
    if (rows_per_strip < 1) rows_per_strip = raster.height;
    const std::size_t row_bytes = static_cast<std::size_t>(raster.width) *
                                  raster.band_count() *
                                  sample_type_bytes(raster.type);
    for (std::size_t s = 0; s < offs->numbers.size(); ++s) {
      int y0 = static_cast<int>(s * rows_per_strip);
      int h = static_cast<int>(
          std::min<long>(rows_per_strip, raster.height - y0));
      if (h <= 0) break;
      auto data = chunk_bytes(static_cast<std::size_t>(offs->numbers[s]),
                              static_cast<std::size_t>(cnts->numbers[s]),
                              deflate, row_bytes * h);
      scatter(raster, data, 0, y0, raster.width, h, raster.width);
    }
  }

  void read_tiled(GeoRaster& raster, bool deflate) const {
    const Entry* offs = find(kTagTileOffsets);
    const Entry* cnts = find(kTagTileByteCounts);
    const Entry* twe = find(kTagTileWidth);
    const Entry* the = find(kTagTileLength);
    if (!offs || !cnts || !twe || !the) {
      throw DataError(path_ + ": missing tile layout tags");
    }
    int tw = static_cast<int>(twe->numbers.at(0));
    int th = static_cast<int>(the->numbers.at(0));
    if (tw < 1 || th < 1) throw DataError(path_ + ": bad tile size");
    int tiles_across = (raster.width + tw - 1) / tw;
    const std::size_t tile_bytes = static_cast<std::size_t>(tw) * th *
                                   raster.band_count() *
                                   sample_type_bytes(raster.type);
    for (std::size_t t = 0; t < offs->numbers.size(); ++t) {
      int tx = static_cast<int>(t) % tiles_across;
      int ty = static_cast<int>(t) / tiles_across;
      auto data = chunk_bytes(static_cast<std::size_t>(offs->numbers[t]),
                              static_cast<std::size_t>(cnts->numbers[t]),
                              deflate, tile_bytes);
      scatter(raster, data, tx * tw, ty * th, tw, th, tw);
    }
  }

  std::string path_;
  std::vector<std::uint8_t> bytes_;
  std::map<std::uint16_t, Entry> entries_;
};

class Writer {
 public:
  Writer(const GeoRaster& raster, const WriteOptions& options)
      : raster_(raster), options_(options) {}

  void run(const std::string& path) {
    if (raster_.width < 1 || raster_.height < 1 || raster_.band_count() < 1) {
      throw ConfigError("cannot write empty raster");
    }
    build_pixel_data();
    build_strips();
    build_ifd_and_layout();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open for write: " + path);
    out.write(reinterpret_cast<const char*>(file_.data()),
              static_cast<std::streamsize>(file_.size()));
    if (!out) throw DataError("write failed: " + path);
  }

 private:
  void put16(std::vector<std::uint8_t>& v, std::uint16_t x) {
    v.push_back(x & 0xff);
    v.push_back((x >> 8) & 0xff);
  }
  void put32(std::vector<std::uint8_t>& v, std::uint32_t x) {
    for (int i = 0; i < 4; ++i) v.push_back((x >> (8 * i)) & 0xff);
  }
  void put64f(std::vector<std::uint8_t>& v, double d) {
    std::uint64_t u;
    std::memcpy(&u, &d, 8);
    for (int i = 0; i < 8; ++i) v.push_back((u >> (8 * i)) & 0xff);
  }

  void build_pixel_data() {
    const int bands = raster_.band_count();
    const std::size_t bpp = sample_type_bytes(raster_.type);
    pixel_data_.resize(raster_.samples_per_band() * bands * bpp);
    std::size_t pos = 0;
    for (int r = 0; r < raster_.height; ++r) {
      for (int c = 0; c < raster_.width; ++c) {
        for (int b = 0; b < bands; ++b) {
          float v = raster_.at(b, c, r);
          switch (raster_.type) {
            case SampleType::UInt8: {
              double d = v;
              if (d < 0.0 || d > 255.0 || d != static_cast<double>(
                                                   static_cast<int>(d))) {
                throw DataError("sample not representable as uint8");
              }
              pixel_data_[pos++] = static_cast<std::uint8_t>(d);
              break;
            }
            case SampleType::UInt16: {
              double d = v;
              if (d < 0.0 || d > 65535.0 || d != static_cast<double>(
                                                     static_cast<int>(d))) {
                throw DataError("sample not representable as uint16");
              }
              std::uint16_t u = static_cast<std::uint16_t>(d);
              pixel_data_[pos++] = u & 0xff;
              pixel_data_[pos++] = (u >> 8) & 0xff;
              break;
            }
            case SampleType::Float32: {
              std::uint32_t u;
              std::memcpy(&u, &v, 4);
              for (int i = 0; i < 4; ++i) {
                pixel_data_[pos++] = (u >> (8 * i)) & 0xff;
              }
              break;
            }
          }
        }
      }
    }
  }

  void build_strips() {
    const std::size_t row_bytes = static_cast<std::size_t>(raster_.width) *
                                  raster_.band_count() *
                                  sample_type_bytes(raster_.type);
    // ~8 MiB strips keep memory bounded for large rasters.
    rows_per_strip_ = static_cast<int>(
        std::max<std::size_t>(1, (8u << 20) / std::max<std::size_t>(
                                                  row_bytes, 1)));
    rows_per_strip_ = std::min(rows_per_strip_, raster_.height);
    for (int y0 = 0; y0 < raster_.height; y0 += rows_per_strip_) {
      int h = std::min(rows_per_strip_, raster_.height - y0);
      const std::uint8_t* src = pixel_data_.data() + row_bytes * y0;
      std::size_t n = row_bytes * h;
      if (options_.deflate) {
        uLongf bound = compressBound(n);
        std::vector<std::uint8_t> comp(bound);
        int rc = compress2(comp.data(), &bound, src, n, Z_DEFAULT_COMPRESSION);
        if (rc != Z_OK) throw Error("deflate compression failed");
        comp.resize(bound);
        strips_.push_back(std::move(comp));
      } else {
        strips_.emplace_back(src, src + n);
      }
    }
  }

  struct TagValue {
    std::uint16_t tag;
    std::uint16_t type;
    std::vector<double> numbers;
    std::string text;
  };

  std::string metadata_text() const {
    std::string s;
    for (const auto& [k, v] : raster_.metadata) {
      if (!s.empty()) s += '\n';
      s += k + "=" + v;
    }
    return s;
  }

  static std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
  }

  void build_ifd_and_layout() {
    const int bands = raster_.band_count();
    std::vector<TagValue> tags;
    auto add = [&tags](std::uint16_t tag, std::uint16_t type,
                       std::vector<double> nums) {
      tags.push_back({tag, type, std::move(nums), {}});
    };

    add(kTagImageWidth, kTypeLong, {static_cast<double>(raster_.width)});
    add(kTagImageLength, kTypeLong, {static_cast<double>(raster_.height)});
    add(kTagBitsPerSample, kTypeShort,
        std::vector<double>(bands, 8.0 * sample_type_bytes(raster_.type)));
    add(kTagCompression, kTypeShort,
        {options_.deflate ? static_cast<double>(kCompressionDeflateAdobe)
                          : static_cast<double>(kCompressionNone)});
    add(kTagPhotometric, kTypeShort, {1.0});
    std::string desc = metadata_text();
    if (!desc.empty()) {
      tags.push_back({kTagImageDescription, kTypeAscii, {}, desc});
    }
    add(kTagStripOffsets, kTypeLong,
        std::vector<double>(strips_.size(), 0.0));  // patched below
    add(kTagSamplesPerPixel, kTypeShort, {static_cast<double>(bands)});
    add(kTagRowsPerStrip, kTypeLong, {static_cast<double>(rows_per_strip_)});
    {
      std::vector<double> counts;
      counts.reserve(strips_.size());
      for (const auto& s : strips_) {
        counts.push_back(static_cast<double>(s.size()));
      }
      add(kTagStripByteCounts, kTypeLong, std::move(counts));
    }
    add(kTagPlanarConfig, kTypeShort, {1.0});
    int fmt = raster_.type == SampleType::Float32 ? 3 : 1;
    add(kTagSampleFormat, kTypeShort,
        std::vector<double>(bands, static_cast<double>(fmt)));
    add(kTagModelPixelScale, kTypeDouble,
        {raster_.transform.res_x, raster_.transform.res_y, 0.0});
    add(kTagModelTiepoint, kTypeDouble,
        {0.0, 0.0, 0.0, raster_.transform.origin_x, raster_.transform.origin_y,
         0.0});
    if (raster_.nodata.has_value()) {
      tags.push_back(
          {kTagGdalNodata, kTypeAscii, {}, format_double(*raster_.nodata)});
    }

    // Layout: header(8) | IFD | out-of-line tag values | strip data.
    // Tags must appear in ascending id order; they already do by
    // construction except ImageDescription, so sort to be safe.
    std::sort(tags.begin(), tags.end(),
              [](const TagValue& a, const TagValue& b) { return a.tag < b.tag; });

    std::size_t ifd_size = 2 + tags.size() * 12 + 4;
    std::size_t value_off = 8 + ifd_size;
    std::vector<std::uint8_t> value_area;
    struct Placed {
      std::uint32_t count;
      std::uint32_t inline_or_offset;
      bool is_offset;
    };
    std::vector<Placed> placed(tags.size());

    auto encode_numbers = [&](const TagValue& t,
                              std::vector<std::uint8_t>& out) {
      for (double d : t.numbers) {
        switch (t.type) {
          case kTypeShort:
            put16(out, static_cast<std::uint16_t>(d));
            break;
          case kTypeLong:
            put32(out, static_cast<std::uint32_t>(d));
            break;
          case kTypeDouble:
            put64f(out, d);
            break;
          default:
            throw Error("unsupported tag encoding");
        }
      }
    };

    // First pass: compute value area (strip offsets patched later, but their
    // size is known).
    for (std::size_t i = 0; i < tags.size(); ++i) {
      const TagValue& t = tags[i];
      std::uint32_t count = t.type == kTypeAscii
                                ? static_cast<std::uint32_t>(t.text.size() + 1)
                                : static_cast<std::uint32_t>(t.numbers.size());
      std::size_t total = type_size(t.type) * count;
      placed[i].count = count;
      if (total <= 4) {
        placed[i].is_offset = false;
      } else {
        if (value_area.size() % 2 != 0) value_area.push_back(0);
        placed[i].is_offset = true;
        placed[i].inline_or_offset =
            static_cast<std::uint32_t>(value_off + value_area.size());
        if (t.type == kTypeAscii) {
          value_area.insert(value_area.end(), t.text.begin(), t.text.end());
          value_area.push_back(0);
        } else {
          encode_numbers(t, value_area);
        }
      }
    }

    std::size_t data_off = value_off + value_area.size();
    if (data_off % 2 != 0) data_off += 1;

    // Patch strip offsets now that the data origin is known.
    {
      std::size_t off = data_off;
      for (auto& t : tags) {
        if (t.tag == kTagStripOffsets) {
          for (std::size_t s = 0; s < strips_.size(); ++s) {
            t.numbers[s] = static_cast<double>(off);
            off += strips_[s].size();
          }
        }
      }
      // Re-encode out-of-line numeric values with patched offsets.
      value_area.clear();
      for (std::size_t i = 0; i < tags.size(); ++i) {
        const TagValue& t = tags[i];
        std::size_t total = type_size(t.type) * placed[i].count;
        if (total <= 4) continue;
        if (value_area.size() % 2 != 0) value_area.push_back(0);
        placed[i].inline_or_offset =
            static_cast<std::uint32_t>(value_off + value_area.size());
        if (t.type == kTypeAscii) {
          value_area.insert(value_area.end(), t.text.begin(), t.text.end());
          value_area.push_back(0);
        } else {
          encode_numbers(t, value_area);
        }
      }
    }

    // Inline values.
    for (std::size_t i = 0; i < tags.size(); ++i) {
      const TagValue& t = tags[i];
      std::size_t total = type_size(t.type) * placed[i].count;
      if (total > 4) continue;
      std::vector<std::uint8_t> small;
      if (t.type == kTypeAscii) {
        small.assign(t.text.begin(), t.text.end());
        small.push_back(0);
      } else {
        encode_numbers(t, small);
      }
      small.resize(4, 0);
      placed[i].inline_or_offset = static_cast<std::uint32_t>(
          small[0] | (small[1] << 8) | (small[2] << 16) | (small[3] << 24));
    }

    // Assemble the file image.
    file_.clear();
    file_.reserve(data_off + pixel_data_.size());
    file_.push_back('I');
    file_.push_back('I');
    put16(file_, 42);
    put32(file_, 8);  // IFD immediately after header
    put16(file_, static_cast<std::uint16_t>(tags.size()));
    for (std::size_t i = 0; i < tags.size(); ++i) {
      put16(file_, tags[i].tag);
      put16(file_, tags[i].type);
      put32(file_, placed[i].count);
      put32(file_, placed[i].inline_or_offset);
    }
    put32(file_, 0);  // no next IFD
    file_.insert(file_.end(), value_area.begin(), value_area.end());
    while (file_.size() < data_off) file_.push_back(0);
    for (const auto& s : strips_) {
      file_.insert(file_.end(), s.begin(), s.end());
    }
  }

  const GeoRaster& raster_;
  WriteOptions options_;
  std::vector<std::uint8_t> pixel_data_;
  std::vector<std::vector<std::uint8_t>> strips_;
  int rows_per_strip_ = 0;
  std::vector<std::uint8_t> file_;
};

}  // namespace

GeoRaster read_raster(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw DataError("raster file does not exist: " + path);
  }
  return Reader(path).run();
}

void write_raster(const GeoRaster& raster, const std::string& path,
                  const WriteOptions& options) {
  Writer(raster, options).run(path);
}

}  // namespace rocktraits
