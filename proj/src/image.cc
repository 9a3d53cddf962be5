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

#include "rblur/image.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "rblur/errors.h"

namespace rblur {
namespace {

void check_dims(int channels, int height, int width) {
  if (channels != 1 && channels != 3) {
    throw InputError("image must have 1 or 3 channels, got " +
                     std::to_string(channels));
  }
  if (height < 1 || width < 1) {
    throw InputError("image dimensions must be positive");
  }
}

}  // namespace

Image::Image(int channels, int height, int width, float fill)
    : channels_(channels), height_(height), width_(width) {
  check_dims(channels, height, width);
  data_.assign(static_cast<std::size_t>(channels) * plane_size(), fill);
}

Image::Image(int channels, int height, int width, std::vector<float> samples)
    : channels_(channels),
      height_(height),
      width_(width),
      data_(std::move(samples)) {
  check_dims(channels, height, width);
  if (data_.size() != static_cast<std::size_t>(channels) * plane_size()) {
    throw InputError("sample count does not match image dimensions");
  }
}

void Image::check_finite() const {
  for (float v : data_) {
    if (!std::isfinite(v)) throw InputError("image contains non-finite sample");
  }
}

double max_abs_diff(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw InputError("image shapes differ");
  double worst = 0.0;
  auto sa = a.samples();
  auto sb = b.samples();
  for (std::size_t i = 0; i < sa.size(); ++i) {
    worst = std::max(worst, std::abs(static_cast<double>(sa[i]) - sb[i]));
  }
  return worst;
}

double l2_distance(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw InputError("image shapes differ");
  double sum = 0.0;
  auto sa = a.samples();
  auto sb = b.samples();
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double d = static_cast<double>(sa[i]) - sb[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

std::pair<float, float> sample_range(const Image& img) {
  auto s = img.samples();
  if (s.empty()) return {0.0f, 0.0f};
  auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  return {*lo, *hi};
}

}  // namespace rblur
