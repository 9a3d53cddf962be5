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

// Visual-field coordinates and the square level-set (L-infinity) eccentricity
// metric. Eccentricity of pixel p relative to fixation f is
//
//   e = max(|x_p - x_f|, |y_p - y_f|) / W_V
//
// where W_V is the visual-field width. Coordinates are integer pixel indices.

#ifndef RBLUR_GEOMETRY_H_
#define RBLUR_GEOMETRY_H_

#include <cstddef>
#include <vector>

namespace rblur {

struct PixelCoord {
  int x = 0;
  int y = 0;
  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

using FixationPoint = PixelCoord;

// The square region the transform operates over. `height` may be smaller than
// `width`; W_V is always `width`.
class VisualField {
 public:
  explicit VisualField(int width) : VisualField(width, width) {}
  VisualField(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  bool contains(PixelCoord p) const {
    return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_;
  }

 private:
  int width_;
  int height_;
};

// L-infinity distance in pixels.
inline int chebyshev_distance(PixelCoord a, PixelCoord b) {
  const int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
  const int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
  return dx > dy ? dx : dy;
}

// Throws InputError if either point is outside the field.
double eccentricity(PixelCoord p, FixationPoint f, const VisualField& field);

// Per-pixel integer L-infinity distances from a fixation over a
// height x width raster. Normalized eccentricity is distance / W_V.
class EccentricityMap {
 public:
  EccentricityMap(int height, int width, int field_width,
                  std::vector<int> distances, FixationPoint fixation);

  int height() const { return height_; }
  int width() const { return width_; }
  int field_width() const { return field_width_; }
  FixationPoint fixation() const { return fixation_; }

  int distance(int y, int x) const {
    return distances_[static_cast<std::size_t>(y) * width_ + x];
  }
  double eccentricity(int y, int x) const {
    return static_cast<double>(distance(y, x)) / field_width_;
  }
  const std::vector<int>& distances() const { return distances_; }
  int max_distance() const;

 private:
  int height_;
  int width_;
  int field_width_;
  std::vector<int> distances_;
  FixationPoint fixation_;
};

EccentricityMap eccentricity_map(FixationPoint f, const VisualField& field);

// Map over an image frame of the given size (which must fit in the field).
// Images larger than W_V along either axis are rejected.
EccentricityMap eccentricity_map(FixationPoint f, const VisualField& field,
                                 int height, int width);

}  // namespace rblur

#endif  // RBLUR_GEOMETRY_H_
