// Copyright 2026 The RBlur Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rblur/image_io.h"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "rblur/errors.h"
#include "rblur/foveate.h"

namespace rblur {
namespace {

constexpr char kRawMagic[4] = {'R', 'B', 'L', 'F'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
  return v;
}

// Interleaved 8-bit samples, channel-minor.
std::vector<std::uint8_t> interleave(const Image& img) {
  std::vector<std::uint8_t> px(img.size());
  const int c = img.channels();
  for (int ch = 0; ch < c; ++ch) {
    auto plane = img.plane(ch);
    for (std::size_t i = 0; i < plane.size(); ++i) {
      px[i * c + ch] = quantize_sample(plane[i]);
    }
  }
  return px;
}

Image deinterleave(int channels, int height, int width,
                   std::span<const std::uint8_t> px) {
  Image img(channels, height, width);
  for (int ch = 0; ch < channels; ++ch) {
    auto plane = img.plane(ch);
    for (std::size_t i = 0; i < plane.size(); ++i) {
      plane[i] = px[i * channels + ch] / 255.0f;
    }
  }
  return img;
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  png_image info;
  std::memset(&info, 0, sizeof(info));
  info.version = PNG_IMAGE_VERSION;
  info.width = static_cast<png_uint_32>(img.width());
  info.height = static_cast<png_uint_32>(img.height());
  info.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const std::vector<std::uint8_t> px = interleave(img);
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&info, nullptr, &size, 0, px.data(), 0, nullptr)) {
    throw DataError(std::string("PNG encode failed: ") + info.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&info, out.data(), &size, 0, px.data(), 0,
                                 nullptr)) {
    throw DataError(std::string("PNG encode failed: ") + info.message);
  }
  out.resize(size);
  return out;
}

Image decode_png(std::span<const std::uint8_t> bytes) {
  png_image info;
  std::memset(&info, 0, sizeof(info));
  info.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&info, bytes.data(), bytes.size())) {
    throw DataError(std::string("PNG decode failed: ") + info.message);
  }
  const bool color = (info.format & PNG_FORMAT_FLAG_COLOR) != 0;
  info.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> px(PNG_IMAGE_SIZE(info));
  if (!png_image_finish_read(&info, nullptr, px.data(), 0, nullptr)) {
    png_image_free(&info);
    throw DataError(std::string("PNG decode failed: ") + info.message);
  }
  return deinterleave(color ? 3 : 1, static_cast<int>(info.height),
                      static_cast<int>(info.width), px);
}

std::vector<std::uint8_t> encode_pnm(const Image& img) {
  const std::string header = std::string(img.channels() == 3 ? "P6" : "P5") +
                             "\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const std::vector<std::uint8_t> px = interleave(img);
  out.insert(out.end(), px.begin(), px.end());
  return out;
}

Image decode_pnm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 2;
  auto next_token = [&]() -> long {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    long v = 0;
    bool any = false;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      v = v * 10 + (bytes[pos++] - '0');
      any = true;
      if (v > (1L << 30)) throw DataError("PNM header value too large");
    }
    if (!any) throw DataError("malformed PNM header");
    return v;
  };
  const int channels = bytes[1] == '6' ? 3 : 1;
  const long width = next_token();
  const long height = next_token();
  const long maxval = next_token();
  if (width < 1 || height < 1) throw DataError("PNM dimensions must be positive");
  if (maxval != 255) throw DataError("only 8-bit PNM (maxval 255) is supported");
  ++pos;  // single whitespace before the raster
  const std::size_t count = static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() < pos + count) throw DataError("truncated PNM raster");
  return deinterleave(channels, static_cast<int>(height), static_cast<int>(width),
                      bytes.subspan(pos, count));
}

std::vector<std::uint8_t> encode_raw(const Image& img) {
  std::vector<std::uint8_t> out(kRawMagic, kRawMagic + 4);
  put_u32(out, static_cast<std::uint32_t>(img.channels()));
  put_u32(out, static_cast<std::uint32_t>(img.height()));
  put_u32(out, static_cast<std::uint32_t>(img.width()));
  out.reserve(out.size() + img.size() * 4);
  for (float v : img.samples()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

Image decode_raw(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16) throw DataError("truncated raw float header");
  const std::uint32_t c = get_u32(bytes, 4);
  const std::uint32_t h = get_u32(bytes, 8);
  const std::uint32_t w = get_u32(bytes, 12);
  if ((c != 1 && c != 3) || h == 0 || w == 0 || h > (1u << 16) || w > (1u << 16)) {
    throw DataError("invalid raw float dimensions");
  }
  const std::size_t count = static_cast<std::size_t>(c) * h * w;
  if (bytes.size() != 16 + 4 * count) throw DataError("raw float size mismatch");
  std::vector<float> samples(count);
  for (std::size_t i = 0; i < count; ++i) {
    samples[i] = std::bit_cast<float>(get_u32(bytes, 16 + 4 * i));
  }
  return Image(static_cast<int>(c), static_cast<int>(h), static_cast<int>(w),
               std::move(samples));
}

}  // namespace

ImageFormat format_for_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  if (ext == ".png") return ImageFormat::kPng;
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return ImageFormat::kPnm;
  if (ext == ".rbf") return ImageFormat::kRawFloat;
  throw DataError("unsupported image extension '" + ext + "'");
}

std::uint8_t quantize_sample(float v) {
  const double clamped = std::clamp(static_cast<double>(v), 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(255.0 * clamped));
}

std::vector<std::uint8_t> encode_image(const Image& img, ImageFormat format) {
  if (img.empty()) throw InputError("cannot encode an empty image");
  switch (format) {
    case ImageFormat::kPng:
      return encode_png(img);
    case ImageFormat::kPnm:
      return encode_pnm(img);
    case ImageFormat::kRawFloat:
      return encode_raw(img);
  }
  throw InputError("unknown image format");
}

Image decode_image(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(kPngSig, kPngSig + 8, bytes.begin())) {
    return decode_png(bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6')) {
    return decode_pnm(bytes);
  }
  if (bytes.size() >= 4 && std::equal(kRawMagic, kRawMagic + 4, bytes.begin())) {
    return decode_raw(bytes);
  }
  throw DataError("unrecognized image format");
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("write failed for " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

Image read_image(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  try {
    return decode_image(bytes);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  } catch (const InputError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_image(const std::filesystem::path& path, const Image& img) {
  write_image(path, img, format_for_path(path));
}

void write_image(const std::filesystem::path& path, const Image& img,
                 ImageFormat format) {
  write_file(path, encode_image(img, format));
}

Heatmap read_heatmap(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  const bool eight_bit =
      !(bytes.size() >= 4 && std::equal(kRawMagic, kRawMagic + 4, bytes.begin()));
  Image img;
  try {
    img = to_grayscale(decode_image(bytes));
  } catch (const std::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  std::vector<double> w(img.plane_size());
  auto plane = img.plane(0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = eight_bit ? std::round(plane[i] * 255.0) : plane[i];
  }
  try {
    return Heatmap(img.height(), img.width(), std::move(w));
  } catch (const InputError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace rblur
