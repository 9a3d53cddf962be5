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

// The foveation pipeline: photoreceptor noise, a grayscale copy, adaptive
// Gaussian blur of both copies and an acuity-weighted blend.

#ifndef RBLUR_FOVEATE_H_
#define RBLUR_FOVEATE_H_

#include <cstdint>
#include <vector>

#include "rblur/acuity.h"
#include "rblur/geometry.h"
#include "rblur/image.h"
#include "rblur/random.h"

namespace rblur {

struct RBlurConfig {
  AcuityParams acuity;
  int field_width = 224;
  double noise_scale = 0.125;
  int viewing_distance = 3;
  int bin_count = kDefaultBinCount;
  int merge_threshold = kDefaultMergeThreshold;
  std::uint64_t seed = 0;

  void validate() const;
};

// Independent N(0, sigma^2) perturbation per sample; no clamping.
Image add_gaussian_noise(const Image& img, double sigma, Rng& rng);

// BT.601 luma. One-channel input is returned unchanged.
Image to_grayscale(const Image& img);

// Normalized Gaussian taps for offsets -radius .. radius, radius = ceil(3s).
std::vector<double> gaussian_kernel(double sigma);

// Symmetric (half-sample) reflection of index i into [0, n).
inline int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

// Separable Gaussian blur with reflect padding; sigma = 0 is the identity.
Image gaussian_blur_fixed(const Image& img, double sigma);

// Per-pixel sigma from the channel's table entry at that pixel's distance.
// Each distinct sigma blurs only the pixels whose distance maps to it, and
// every output pixel reads the unmodified input.
Image adaptive_blur(const Image& img, const AcuityTable& table,
                    const EccentricityMap& emap, Channel channel);

struct BlendDiagnostics {
  long zero_weight_pixels = 0;
};

// v = (v_c * D_C + v_g * D_R) / (D_C + D_R). `gray_blurred` has one channel
// and is replicated across the color channels. Pixels with a zero
// denominator take the gray value and are counted in `diagnostics`.
Image blend(const Image& color_blurred, const Image& gray_blurred,
            const AcuityTable& table, const EccentricityMap& emap,
            BlendDiagnostics* diagnostics = nullptr);

// Holds the acuity table for one configuration so repeated calls skip the
// table build.
class Foveator {
 public:
  explicit Foveator(const RBlurConfig& config);

  const RBlurConfig& config() const { return config_; }
  const AcuityTable& table() const { return table_; }
  VisualField field() const { return VisualField(config_.field_width); }

  // Blur and blend an image that already carries its photoreceptor noise.
  Image foveate(const Image& noisy, FixationPoint fixation,
                BlendDiagnostics* diagnostics = nullptr) const;

  // Noise with config().noise_scale, then foveate().
  Image apply(const Image& img, FixationPoint fixation, Rng& rng) const;

 private:
  RBlurConfig config_;
  AcuityTable table_;
};

// One-shot pipeline; builds the table on every call.
Image rblur(const Image& img, FixationPoint fixation, const RBlurConfig& config,
            Rng& rng);

}  // namespace rblur

#endif  // RBLUR_FOVEATE_H_
