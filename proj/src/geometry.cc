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

#include "rblur/geometry.h"

#include <algorithm>
#include <string>

#include "rblur/errors.h"

namespace rblur {
namespace {

std::string describe(PixelCoord p) {
  return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
}

}  // namespace

VisualField::VisualField(int width, int height)
    : width_(width), height_(height) {
  if (width < 1) throw ConfigError("visual field width must be >= 1");
  if (height < 1 || height > width) {
    throw ConfigError("visual field height must be in [1, width]");
  }
}

double eccentricity(PixelCoord p, FixationPoint f, const VisualField& field) {
  if (!field.contains(p)) {
    throw InputError("pixel " + describe(p) + " outside visual field");
  }
  if (!field.contains(f)) {
    throw InputError("fixation " + describe(f) + " outside visual field");
  }
  return static_cast<double>(chebyshev_distance(p, f)) / field.width();
}

EccentricityMap::EccentricityMap(int height, int width, int field_width,
                                 std::vector<int> distances,
                                 FixationPoint fixation)
    : height_(height),
      width_(width),
      field_width_(field_width),
      distances_(std::move(distances)),
      fixation_(fixation) {}

int EccentricityMap::max_distance() const {
  return distances_.empty()
             ? 0
             : *std::max_element(distances_.begin(), distances_.end());
}

EccentricityMap eccentricity_map(FixationPoint f, const VisualField& field) {
  return eccentricity_map(f, field, field.height(), field.width());
}

EccentricityMap eccentricity_map(FixationPoint f, const VisualField& field,
                                 int height, int width) {
  if (height < 1 || width < 1) throw InputError("empty raster");
  if (width > field.width() || height > field.width()) {
    throw InputError("raster " + std::to_string(width) + "x" +
                     std::to_string(height) + " exceeds visual field width " +
                     std::to_string(field.width()));
  }
  if (!field.contains(f)) {
    throw InputError("fixation " + describe(f) + " outside visual field");
  }
  std::vector<int> d(static_cast<std::size_t>(height) * width);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      d[static_cast<std::size_t>(y) * width + x] =
          chebyshev_distance({x, y}, f);
    }
  }
  return EccentricityMap(height, width, field.width(), std::move(d), f);
}

}  // namespace rblur
