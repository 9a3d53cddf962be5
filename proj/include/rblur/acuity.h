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

// Photopic (color) and scotopic (gray) acuity curves over eccentricity, their
// quantization into a small number of bins, the viewing-distance shift, and
// the acuity -> Gaussian sigma mapping.
//
// The acuity envelope is the larger of a Laplace density with scale `sigma`
// and a Cauchy density with scale `alpha * sigma`, both centered at 0:
//
//   env(e) = max(exp(-e/s) / (2s), 1 / (pi*a*s*(1 + (e/(a*s))^2)))
//
// The Laplace peak 1/(2s) exceeds 1 for the default scales, so the envelope is
// brought into [0, 1] either by dividing by that peak (kPeak, the default) or
// by clamping at 1 (kClamp).
//
//   D_C(e) = env(e; sigma_color, alpha)
//   D_R(e) = p_max * (1 - env(e; sigma_rod, alpha))
//   sigma(d) = beta * W_V * (1 - D(d / W_V))

#ifndef RBLUR_ACUITY_H_
#define RBLUR_ACUITY_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rblur/geometry.h"

namespace rblur {

enum class EnvelopeNorm { kPeak, kClamp };

std::string to_string(EnvelopeNorm norm);
EnvelopeNorm parse_envelope_norm(const std::string& name);

struct AcuityParams {
  double sigma_color = 0.12;
  double sigma_rod = 0.09;
  double alpha = 2.5;
  double p_max = 0.12;
  double beta = 0.05;
  EnvelopeNorm norm = EnvelopeNorm::kPeak;

  // Throws ConfigError unless every scale is finite and positive (p_max and
  // beta may be 0) and p_max <= 1.
  void validate() const;
};

// Calibrated against the W_V = 224 reference field: the base table's largest
// color sigma is 10.85 px and the in-focus square at viewing distance 3 is
// 49 px wide.
inline constexpr int kDefaultBinCount = 38;
inline constexpr int kDefaultMergeThreshold = 2;

double acuity_envelope(double e, double sigma, double alpha,
                       EnvelopeNorm norm = EnvelopeNorm::kPeak);
double photopic_acuity(double e, const AcuityParams& params);
double scotopic_acuity(double e, const AcuityParams& params);

enum class Channel { kColor, kGray };

struct AcuityBin {
  int first_distance = 0;  // inclusive
  int last_distance = 0;   // inclusive
  double acuity = 0.0;
  double sigma = 0.0;

  int size() const { return last_distance - first_distance + 1; }
};

// Quantized acuity for one channel, indexed by integer L-infinity distance
// d = 0 .. W_V.
struct ChannelTable {
  // Ordered by eccentricity; bins[0] contains the fixation (d = 0).
  std::vector<AcuityBin> bins;
  std::vector<int> bin_of_distance;
  std::vector<double> raw;
  std::vector<double> acuity;
  std::vector<double> sigma;

  double max_sigma() const;
};

class AcuityTable {
 public:
  AcuityTable(int field_width, const AcuityParams& params, int bin_count,
              int merge_threshold, ChannelTable color, ChannelTable gray);

  int field_width() const { return field_width_; }
  const AcuityParams& params() const { return params_; }
  int bin_count() const { return bin_count_; }
  int merge_threshold() const { return merge_threshold_; }
  int viewing_distance() const { return viewing_distance_; }

  const ChannelTable& color() const { return color_; }
  const ChannelTable& gray() const { return gray_; }
  const ChannelTable& channel(Channel c) const {
    return c == Channel::kColor ? color_ : gray_;
  }

  double sigma(Channel c, int distance) const {
    return channel(c).sigma[static_cast<std::size_t>(distance)];
  }
  double color_acuity(int distance) const {
    return color_.acuity[static_cast<std::size_t>(distance)];
  }
  double gray_acuity(int distance) const {
    return gray_.acuity[static_cast<std::size_t>(distance)];
  }

  // Side length of the square occupied by color bin 1 around a fixation far
  // from the borders: 2 * d_max + 1.
  int in_focus_width() const;

  friend AcuityTable apply_viewing_distance(const AcuityTable& table, int k);

 private:
  int field_width_;
  AcuityParams params_;
  int bin_count_;
  int merge_threshold_;
  int viewing_distance_ = 0;
  ChannelTable color_;
  ChannelTable gray_;
};

// Assigns each value to a histogram group: `bin_count` equal-width bins over
// [min, max] (last bin closed), bins with fewer than `merge_threshold`
// members merged into the group on their left, an underfull leftmost group
// merged rightward, and empty bins dropped. Returned ids are dense, ordered by
// value, starting at 0.
std::vector<int> histogram_groups(std::span<const double> values,
                                  int bin_count, int merge_threshold);

AcuityTable build_acuity_table(const VisualField& field,
                               const AcuityParams& params,
                               int bin_count = kDefaultBinCount,
                               int merge_threshold = kDefaultMergeThreshold);

// Drops the k lowest-acuity bins: a distance in bin i (1-based, by
// eccentricity) takes the value of bin max(1, i - k). Composes additively.
AcuityTable apply_viewing_distance(const AcuityTable& table, int k);

// Tab-separated dump: distance, D_C_q, D_R_q, sigma_color, sigma_gray.
void write_table_dump(std::ostream& out, const AcuityTable& table);

}  // namespace rblur

#endif  // RBLUR_ACUITY_H_
