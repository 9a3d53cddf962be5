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

#include "rblur/fixation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace rblur {

Heatmap::Heatmap(int height, int width, std::vector<double> weights)
    : Heatmap(height, width, std::move(weights), true) {
  if (!(total() > 0.0)) {
    throw InputError("heatmap needs at least one positive weight");
  }
}

Heatmap::Heatmap(int height, int width, std::vector<double> weights, bool)
    : height_(height), width_(width), weights_(std::move(weights)) {
  if (height < 1 || width < 1) throw InputError("heatmap dimensions must be positive");
  if (weights_.size() != static_cast<std::size_t>(height) * width) {
    throw InputError("heatmap weight count does not match dimensions");
  }
  for (double v : weights_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InputError("heatmap weights must be finite and >= 0");
    }
  }
}

double Heatmap::total() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

ScanpathExhausted::ScanpathExhausted(int produced, int requested)
    : DataError("heatmap exhausted after " + std::to_string(produced) + " of " +
                std::to_string(requested) + " fixations"),
      produced_(produced),
      requested_(requested) {}

Heatmap mask_heatmap(const Heatmap& heatmap, FixationPoint f, double mask_sigma) {
  if (!std::isfinite(mask_sigma) || mask_sigma <= 0.0) {
    throw InputError("mask sigma must be > 0");
  }
  std::vector<double> w = heatmap.weights();
  const double denom = 2.0 * mask_sigma * mask_sigma;
  for (int y = 0; y < heatmap.height(); ++y) {
    for (int x = 0; x < heatmap.width(); ++x) {
      const double dx = x - f.x;
      const double dy = y - f.y;
      w[static_cast<std::size_t>(y) * heatmap.width() + x] *=
          1.0 - std::exp(-(dx * dx + dy * dy) / denom);
    }
  }
  // Masking may legitimately empty the map; sample_scanpath reports that.
  return Heatmap(heatmap.height(), heatmap.width(), std::move(w), true);
}

Scanpath sample_scanpath(const Heatmap& heatmap, int n, double mask_sigma,
                         Rng& rng, SamplingMode mode) {
  if (n < 1) throw InputError("scanpath length must be >= 1");
  Scanpath path;
  path.reserve(n);
  Heatmap current = heatmap;
  for (int i = 0; i < n; ++i) {
    const std::vector<double>& w = current.weights();
    if (!(current.total() > 0.0)) throw ScanpathExhausted(i, n);
    std::size_t index;
    if (mode == SamplingMode::kArgmax) {
      index = static_cast<std::size_t>(std::max_element(w.begin(), w.end()) - w.begin());
    } else {
      std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
      index = pick(rng);
    }
    const FixationPoint p{static_cast<int>(index % current.width()),
                          static_cast<int>(index / current.width())};
    path.push_back(p);
    current = mask_heatmap(current, p, mask_sigma);
  }
  return path;
}

Scanpath fixation_grid(const VisualField& field, int side) {
  if (side < 1) throw InputError("grid side must be >= 1");
  Scanpath points;
  points.reserve(static_cast<std::size_t>(side) * side);
  for (int j = 0; j < side; ++j) {
    const int y = static_cast<int>((2LL * j + 1) * field.height() / (2LL * side));
    for (int i = 0; i < side; ++i) {
      const int x = static_cast<int>((2LL * i + 1) * field.width() / (2LL * side));
      points.push_back({x, y});
    }
  }
  return points;
}

Scanpath five_fixations(const VisualField& field) {
  const int r = field.width() - 1;
  const int b = field.height() - 1;
  const FixationPoint candidates[] = {
      {0, 0}, {r, 0}, {0, b}, {r, b}, {field.width() / 2, field.height() / 2}};
  Scanpath points;
  for (const FixationPoint& p : candidates) {
    if (std::find(points.begin(), points.end(), p) == points.end()) {
      points.push_back(p);
    }
  }
  return points;
}

Heatmap center_bias_heatmap(int height, int width, double sigma) {
  if (!std::isfinite(sigma) || sigma <= 0.0) throw InputError("sigma must be > 0");
  std::vector<double> w(static_cast<std::size_t>(height) * width);
  const double cy = (height - 1) / 2.0;
  const double cx = (width - 1) / 2.0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double dy = y - cy;
      const double dx = x - cx;
      w[static_cast<std::size_t>(y) * width + x] =
          std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
    }
  }
  return Heatmap(height, width, std::move(w));
}

std::vector<double> aggregate_scores(std::span<const std::vector<double>> scores) {
  if (scores.empty()) throw InputError("no score vectors to aggregate");
  const std::size_t classes = scores.front().size();
  std::vector<double> mean(classes, 0.0);
  for (const std::vector<double>& s : scores) {
    if (s.size() != classes) throw InputError("score vectors differ in length");
    for (std::size_t c = 0; c < classes; ++c) mean[c] += s[c];
  }
  for (double& m : mean) m /= static_cast<double>(scores.size());
  return mean;
}

bool any_correct(std::span<const int> predictions, int truth) {
  if (predictions.empty()) throw InputError("no predictions");
  return std::find(predictions.begin(), predictions.end(), truth) !=
         predictions.end();
}

}  // namespace rblur
