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

#ifndef RBLUR_IMAGE_H_
#define RBLUR_IMAGE_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace rblur {

// Planar, row-major float raster with 1 or 3 channels. Samples are nominally
// in [0, 1] but nothing here clamps them.
class Image {
 public:
  Image() = default;
  Image(int channels, int height, int width, float fill = 0.0f);
  Image(int channels, int height, int width, std::vector<float> samples);

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t plane_size() const {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  float& at(int c, int y, int x) { return data_[index(c, y, x)]; }
  float at(int c, int y, int x) const { return data_[index(c, y, x)]; }

  std::span<float> plane(int c) {
    return {data_.data() + static_cast<std::size_t>(c) * plane_size(),
            plane_size()};
  }
  std::span<const float> plane(int c) const {
    return {data_.data() + static_cast<std::size_t>(c) * plane_size(),
            plane_size()};
  }
  std::span<float> samples() { return data_; }
  std::span<const float> samples() const { return data_; }

  bool same_shape(const Image& other) const {
    return channels_ == other.channels_ && height_ == other.height_ &&
           width_ == other.width_;
  }

  // Throws InputError if any sample is NaN or infinite.
  void check_finite() const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
  }

  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<float> data_;
};

// Largest absolute per-sample difference. Shapes must agree.
double max_abs_diff(const Image& a, const Image& b);

// Euclidean norm of (a - b) over all samples.
double l2_distance(const Image& a, const Image& b);

std::pair<float, float> sample_range(const Image& img);

}  // namespace rblur

#endif  // RBLUR_IMAGE_H_
