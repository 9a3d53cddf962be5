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

#include "rblur/foveate.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>

#include "rblur/errors.h"

namespace rblur {
namespace {

struct Rect {
  int y0 = std::numeric_limits<int>::max();
  int y1 = -1;
  int x0 = std::numeric_limits<int>::max();
  int x1 = -1;

  void include(int y, int x) {
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
  }
  bool empty() const { return y1 < y0; }
};

// Writes the blur of `src` at the taps in `kernel` into `dst` for every pixel
// of `rect` with label[p] == wanted (or every pixel when label is empty).
// Only the rows feeding the vertical pass get a horizontal pass.
void blur_region(const Image& src, const std::vector<double>& kernel,
                 const Rect& rect, const std::vector<int>& label, int wanted,
                 Image& dst) {
  const int h = src.height();
  const int w = src.width();
  const int r = static_cast<int>(kernel.size() / 2);
  const int span = rect.x1 - rect.x0 + 1;

  std::vector<char> need_row(h, 0);
  if (rect.y0 - r >= 0 && rect.y1 + r < h) {
    std::fill(need_row.begin() + (rect.y0 - r), need_row.begin() + (rect.y1 + r + 1), 1);
  } else {
    for (int y = rect.y0 - r; y <= rect.y1 + r; ++y) need_row[reflect_index(y, h)] = 1;
  }
  const bool interior_x = rect.x0 - r >= 0 && rect.x1 + r < w;

  std::vector<double> horiz(static_cast<std::size_t>(h) * span);
  std::vector<double> acc(span);
  for (int c = 0; c < src.channels(); ++c) {
    const std::span<const float> in = src.plane(c);
    for (int y = 0; y < h; ++y) {
      if (!need_row[y]) continue;
      const float* row = in.data() + static_cast<std::size_t>(y) * w;
      double* out = horiz.data() + static_cast<std::size_t>(y) * span;
      for (int i = 0; i < span; ++i) {
        const int x = rect.x0 + i;
        double sum = 0.0;
        if (interior_x) {
          const float* base = row + x - r;
          for (int j = 0; j <= 2 * r; ++j) sum += kernel[j] * base[j];
        } else {
          for (int j = -r; j <= r; ++j) {
            sum += kernel[j + r] * row[reflect_index(x + j, w)];
          }
        }
        out[i] = sum;
      }
    }
    std::span<float> result = dst.plane(c);
    for (int y = rect.y0; y <= rect.y1; ++y) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int j = -r; j <= r; ++j) {
        const double k = kernel[j + r];
        const double* hrow =
            horiz.data() + static_cast<std::size_t>(reflect_index(y + j, h)) * span;
        for (int i = 0; i < span; ++i) acc[i] += k * hrow[i];
      }
      float* out = result.data() + static_cast<std::size_t>(y) * w;
      const int* lab =
          label.empty() ? nullptr : label.data() + static_cast<std::size_t>(y) * w;
      for (int i = 0; i < span; ++i) {
        const int x = rect.x0 + i;
        if (lab == nullptr || lab[x] == wanted) out[x] = static_cast<float>(acc[i]);
      }
    }
  }
}

void check_map_matches(const Image& img, const EccentricityMap& emap,
                       const AcuityTable& table) {
  if (img.height() != emap.height() || img.width() != emap.width()) {
    throw InputError("eccentricity map does not match image size");
  }
  if (emap.max_distance() > table.field_width()) {
    throw InputError("eccentricity map exceeds acuity table range");
  }
}

}  // namespace

void RBlurConfig::validate() const {
  acuity.validate();
  if (field_width < 1) throw ConfigError("field_width must be >= 1");
  if (!std::isfinite(noise_scale) || noise_scale < 0.0) {
    throw ConfigError("noise_scale must be >= 0");
  }
  if (viewing_distance < 0) throw ConfigError("viewing_distance must be >= 0");
  if (bin_count < 2) throw ConfigError("bins must be >= 2");
  if (merge_threshold < 0) throw ConfigError("merge_threshold must be >= 0");
}

Image add_gaussian_noise(const Image& img, double sigma, Rng& rng) {
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw InputError("noise scale must be finite and >= 0");
  }
  Image out = img;
  if (sigma == 0.0) return out;
  std::normal_distribution<double> noise(0.0, sigma);
  for (float& v : out.samples()) v = static_cast<float>(v + noise(rng));
  return out;
}

Image to_grayscale(const Image& img) {
  if (img.channels() == 1) return img;
  Image out(1, img.height(), img.width());
  auto r = img.plane(0);
  auto g = img.plane(1);
  auto b = img.plane(2);
  auto y = out.plane(0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = static_cast<float>(0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i]);
  }
  return out;
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw InputError("blur sigma must be finite and >= 0");
  }
  if (sigma == 0.0) return {1.0};
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double t = std::exp(-0.5 * (i * i) / (sigma * sigma));
    taps[i + radius] = t;
    total += t;
  }
  for (double& t : taps) t /= total;
  return taps;
}

Image gaussian_blur_fixed(const Image& img, double sigma) {
  const std::vector<double> kernel = gaussian_kernel(sigma);
  if (kernel.size() == 1) return img;
  Image out(img.channels(), img.height(), img.width());
  Rect all{0, img.height() - 1, 0, img.width() - 1};
  blur_region(img, kernel, all, {}, 0, out);
  return out;
}

Image adaptive_blur(const Image& img, const AcuityTable& table,
                    const EccentricityMap& emap, Channel channel) {
  check_map_matches(img, emap, table);
  const std::vector<double>& sigma_of = table.channel(channel).sigma;

  // Distinct sigmas become labels; pixels sharing a sigma share one pass.
  std::map<double, int> label_of_sigma;
  std::vector<int> label_of_distance(sigma_of.size());
  for (std::size_t d = 0; d < sigma_of.size(); ++d) {
    auto [it, inserted] = label_of_sigma.try_emplace(
        sigma_of[d], static_cast<int>(label_of_sigma.size()));
    label_of_distance[d] = it->second;
  }
  std::vector<double> sigma_of_label(label_of_sigma.size());
  for (const auto& [s, l] : label_of_sigma) sigma_of_label[l] = s;

  const int h = img.height();
  const int w = img.width();
  std::vector<int> label(static_cast<std::size_t>(h) * w);
  std::vector<Rect> boxes(sigma_of_label.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int l = label_of_distance[emap.distance(y, x)];
      label[static_cast<std::size_t>(y) * w + x] = l;
      boxes[l].include(y, x);
    }
  }

  Image out = img;
  for (std::size_t l = 0; l < boxes.size(); ++l) {
    if (boxes[l].empty() || sigma_of_label[l] == 0.0) continue;
    blur_region(img, gaussian_kernel(sigma_of_label[l]), boxes[l], label,
                static_cast<int>(l), out);
  }
  return out;
}

Image blend(const Image& color_blurred, const Image& gray_blurred,
            const AcuityTable& table, const EccentricityMap& emap,
            BlendDiagnostics* diagnostics) {
  check_map_matches(color_blurred, emap, table);
  if (gray_blurred.channels() != 1 || gray_blurred.height() != color_blurred.height() ||
      gray_blurred.width() != color_blurred.width()) {
    throw InputError("gray image must be single-channel and match the color image");
  }
  Image out(color_blurred.channels(), color_blurred.height(), color_blurred.width());
  const auto gray = gray_blurred.plane(0);
  long zero_weight = 0;
  for (std::size_t i = 0; i < out.plane_size(); ++i) {
    const int d = emap.distances()[i];
    const double dc = table.color_acuity(d);
    const double dr = table.gray_acuity(d);
    const double denom = dc + dr;
    const bool degenerate = !(denom > 0.0);
    if (degenerate) ++zero_weight;
    for (int c = 0; c < out.channels(); ++c) {
      const double vc = color_blurred.plane(c)[i];
      const double vg = gray[i];
      out.plane(c)[i] =
          static_cast<float>(degenerate ? vg : (vc * dc + vg * dr) / denom);
    }
  }
  if (diagnostics != nullptr) diagnostics->zero_weight_pixels += zero_weight;
  return out;
}

Foveator::Foveator(const RBlurConfig& config)
    : config_(config),
      table_([&] {
        config.validate();
        return apply_viewing_distance(
            build_acuity_table(VisualField(config.field_width), config.acuity,
                               config.bin_count, config.merge_threshold),
            config.viewing_distance);
      }()) {}

Image Foveator::foveate(const Image& noisy, FixationPoint fixation,
                        BlendDiagnostics* diagnostics) const {
  const EccentricityMap emap = eccentricity_map(
      fixation, field(), noisy.height(), noisy.width());
  const Image gray = to_grayscale(noisy);
  const Image color_blurred = adaptive_blur(noisy, table_, emap, Channel::kColor);
  const Image gray_blurred = adaptive_blur(gray, table_, emap, Channel::kGray);
  return blend(color_blurred, gray_blurred, table_, emap, diagnostics);
}

Image Foveator::apply(const Image& img, FixationPoint fixation, Rng& rng) const {
  img.check_finite();
  return foveate(add_gaussian_noise(img, config_.noise_scale, rng), fixation);
}

Image rblur(const Image& img, FixationPoint fixation, const RBlurConfig& config,
            Rng& rng) {
  return Foveator(config).apply(img, fixation, rng);
}

}  // namespace rblur
