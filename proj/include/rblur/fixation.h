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

// Scanpaths from saliency heatmaps, fixed fixation layouts and aggregation of
// per-fixation classifier scores.

#ifndef RBLUR_FIXATION_H_
#define RBLUR_FIXATION_H_

#include <cstddef>
#include <span>
#include <vector>

#include "rblur/errors.h"
#include "rblur/geometry.h"
#include "rblur/random.h"

namespace rblur {

using Scanpath = std::vector<FixationPoint>;

// Nonnegative finite weights; at least one strictly positive on construction.
class Heatmap {
 public:
  Heatmap(int height, int width, std::vector<double> weights);

  int height() const { return height_; }
  int width() const { return width_; }
  double at(int y, int x) const {
    return weights_[static_cast<std::size_t>(y) * width_ + x];
  }
  const std::vector<double>& weights() const { return weights_; }
  double total() const;

 private:
  friend Heatmap mask_heatmap(const Heatmap&, FixationPoint, double);
  Heatmap(int height, int width, std::vector<double> weights, bool);

  int height_;
  int width_;
  std::vector<double> weights_;
};

// Raised when the heatmap runs out of mass before `requested` points.
class ScanpathExhausted : public DataError {
 public:
  ScanpathExhausted(int produced, int requested);
  int produced() const { return produced_; }
  int requested() const { return requested_; }

 private:
  int produced_;
  int requested_;
};

// h'(p) = h(p) * (1 - exp(-|p - f|^2 / (2 mask_sigma^2))); h'(f) = 0.
Heatmap mask_heatmap(const Heatmap& heatmap, FixationPoint f, double mask_sigma);

enum class SamplingMode { kMultinomial, kArgmax };

// Draw, append, mask; repeated n times. Argmax ties resolve to the first
// pixel in row-major order.
Scanpath sample_scanpath(const Heatmap& heatmap, int n, double mask_sigma,
                         Rng& rng,
                         SamplingMode mode = SamplingMode::kMultinomial);

inline double default_mask_sigma(int field_width) { return field_width / 8.0; }

// side x side cell centers of a uniform partition, row-major.
Scanpath fixation_grid(const VisualField& field, int side);

// Four corners then center, duplicates removed (small fields).
Scanpath five_fixations(const VisualField& field);

// Isotropic Gaussian centered on the frame. Stand-in for a learned saliency
// model so the tools run without one.
Heatmap center_bias_heatmap(int height, int width, double sigma);

std::vector<double> aggregate_scores(std::span<const std::vector<double>> scores);

bool any_correct(std::span<const int> predictions, int truth);

}  // namespace rblur

#endif  // RBLUR_FIXATION_H_
