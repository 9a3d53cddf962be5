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

// Image files: 8-bit PNG, binary PGM/PPM, and a raw float format
//
//   "RBLF" | u32 channels | u32 height | u32 width | f32 samples (planar)
//
// with every field little-endian. 8-bit writers clamp to [0, 1] and store
// round(255 * v); readers map byte b to b / 255.

#ifndef RBLUR_IMAGE_IO_H_
#define RBLUR_IMAGE_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rblur/fixation.h"
#include "rblur/image.h"

namespace rblur {

enum class ImageFormat { kPng, kPnm, kRawFloat };

// From the file extension: .png, .pgm/.ppm/.pnm, .rbf.
ImageFormat format_for_path(const std::filesystem::path& path);

std::uint8_t quantize_sample(float v);

std::vector<std::uint8_t> encode_image(const Image& img, ImageFormat format);
// Format is sniffed from the magic bytes. Throws DataError.
Image decode_image(std::span<const std::uint8_t> bytes);

Image read_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const Image& img);
void write_image(const std::filesystem::path& path, const Image& img,
                 ImageFormat format);

// Single-channel weights. 8-bit files keep their byte values (0..255) as
// weights; color inputs are reduced with the luma weights.
Heatmap read_heatmap(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
// Writes to a sibling temporary and renames, so a failed write never leaves
// a truncated file behind.
void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes);

}  // namespace rblur

#endif  // RBLUR_IMAGE_IO_H_
