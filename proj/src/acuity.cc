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

#include "rblur/acuity.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "rblur/errors.h"

namespace rblur {
namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

ChannelTable build_channel(std::vector<double> raw, int field_width,
                           double beta, int bin_count, int merge_threshold,
                           const char* name) {
  const std::vector<int> groups =
      histogram_groups(raw, bin_count, merge_threshold);
  const int group_count = *std::max_element(groups.begin(), groups.end()) + 1;
  const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  if (group_count < 2 && *hi > *lo) {
    throw ConfigError(std::string("fewer than 2 ") + name +
                      " acuity bins survive quantization; lower the merge "
                      "threshold or raise the bin count");
  }

  ChannelTable table;
  table.raw = std::move(raw);
  const int n = static_cast<int>(table.raw.size());

  // Acuity is monotone in distance, so every group is a contiguous run.
  std::vector<int> seen(group_count, 0);
  for (int d = 0; d < n;) {
    const int g = groups[d];
    if (seen[g]) throw std::logic_error("acuity histogram group not contiguous");
    seen[g] = 1;
    int end = d;
    double sum = 0.0;
    while (end < n && groups[end] == g) sum += table.raw[end++];
    AcuityBin bin;
    bin.first_distance = d;
    bin.last_distance = end - 1;
    bin.acuity = sum / (end - d);
    table.bins.push_back(bin);
    d = end;
  }

  table.bin_of_distance.resize(n);
  table.acuity.resize(n);
  table.sigma.resize(n);
  for (std::size_t b = 0; b < table.bins.size(); ++b) {
    AcuityBin& bin = table.bins[b];
    bin.sigma = std::max(0.0, beta * field_width * (1.0 - bin.acuity));
    for (int d = bin.first_distance; d <= bin.last_distance; ++d) {
      table.bin_of_distance[d] = static_cast<int>(b);
      table.acuity[d] = bin.acuity;
      table.sigma[d] = bin.sigma;
    }
  }
  return table;
}

ChannelTable shift_channel(const ChannelTable& in, int k, int field_width,
                           double beta) {
  const int n = static_cast<int>(in.bins.size());
  if (n == 1 || k == 0) return in;
  if (k >= n) {
    throw ConfigError("viewing distance " + std::to_string(k) +
                      " must be smaller than the bin count " +
                      std::to_string(n));
  }
  ChannelTable out;
  out.raw = in.raw;
  out.bins.reserve(n - k);
  AcuityBin first = in.bins[0];
  first.last_distance = in.bins[k].last_distance;
  out.bins.push_back(first);
  for (int j = 1; j < n - k; ++j) {
    AcuityBin bin = in.bins[j + k];
    bin.acuity = in.bins[j].acuity;
    bin.sigma = std::max(0.0, beta * field_width * (1.0 - bin.acuity));
    out.bins.push_back(bin);
  }
  const std::size_t size = in.raw.size();
  out.bin_of_distance.resize(size);
  out.acuity.resize(size);
  out.sigma.resize(size);
  for (std::size_t b = 0; b < out.bins.size(); ++b) {
    const AcuityBin& bin = out.bins[b];
    for (int d = bin.first_distance; d <= bin.last_distance; ++d) {
      out.bin_of_distance[d] = static_cast<int>(b);
      out.acuity[d] = bin.acuity;
      out.sigma[d] = bin.sigma;
    }
  }
  return out;
}

}  // namespace

std::string to_string(EnvelopeNorm norm) {
  return norm == EnvelopeNorm::kPeak ? "peak" : "clamp";
}

EnvelopeNorm parse_envelope_norm(const std::string& name) {
  if (name == "peak") return EnvelopeNorm::kPeak;
  if (name == "clamp") return EnvelopeNorm::kClamp;
  throw ConfigError("unknown envelope normalization '" + name +
                    "' (expected peak or clamp)");
}

void AcuityParams::validate() const {
  if (!positive_finite(sigma_color)) throw ConfigError("sigma_color must be > 0");
  if (!positive_finite(sigma_rod)) throw ConfigError("sigma_rod must be > 0");
  if (!positive_finite(alpha)) throw ConfigError("alpha must be > 0");
  if (!std::isfinite(p_max) || p_max < 0.0 || p_max > 1.0) {
    throw ConfigError("p_max must be in [0, 1]");
  }
  if (!std::isfinite(beta) || beta < 0.0) throw ConfigError("beta must be >= 0");
}

double acuity_envelope(double e, double sigma, double alpha,
                       EnvelopeNorm norm) {
  if (!std::isfinite(e) || e < 0.0) {
    throw InputError("eccentricity must be finite and >= 0");
  }
  if (!positive_finite(sigma) || !positive_finite(alpha)) {
    throw InputError("envelope scales must be finite and > 0");
  }
  const double laplace = std::exp(-e / sigma) / (2.0 * sigma);
  const double cauchy_scale = alpha * sigma;
  const double z = e / cauchy_scale;
  const double cauchy = 1.0 / (std::numbers::pi * cauchy_scale * (1.0 + z * z));
  const double density = std::max(laplace, cauchy);
  if (norm == EnvelopeNorm::kClamp) return std::min(1.0, density);
  // Both densities peak at e = 0; the Laplace peak is the larger one whenever
  // alpha > 2/pi, which the max() below covers either way.
  const double peak =
      std::max(1.0 / (2.0 * sigma), 1.0 / (std::numbers::pi * cauchy_scale));
  return density / peak;
}

double photopic_acuity(double e, const AcuityParams& params) {
  return acuity_envelope(e, params.sigma_color, params.alpha, params.norm);
}

double scotopic_acuity(double e, const AcuityParams& params) {
  return params.p_max *
         (1.0 - acuity_envelope(e, params.sigma_rod, params.alpha, params.norm));
}

double ChannelTable::max_sigma() const {
  double m = 0.0;
  for (const AcuityBin& b : bins) m = std::max(m, b.sigma);
  return m;
}

AcuityTable::AcuityTable(int field_width, const AcuityParams& params,
                         int bin_count, int merge_threshold, ChannelTable color,
                         ChannelTable gray)
    : field_width_(field_width),
      params_(params),
      bin_count_(bin_count),
      merge_threshold_(merge_threshold),
      color_(std::move(color)),
      gray_(std::move(gray)) {}

int AcuityTable::in_focus_width() const {
  return 2 * color_.bins.front().last_distance + 1;
}

std::vector<int> histogram_groups(std::span<const double> values,
                                  int bin_count, int merge_threshold) {
  if (values.empty()) throw InputError("histogram of an empty value list");
  if (bin_count < 2) throw ConfigError("bin count must be >= 2");
  if (merge_threshold < 0) throw ConfigError("merge threshold must be >= 0");

  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) return std::vector<int>(values.size(), 0);

  // Interior edges 1 .. B-1; a value's bin is the number of edges <= value.
  std::vector<double> edges(bin_count - 1);
  for (int j = 1; j < bin_count; ++j) {
    edges[j - 1] = lo + (hi - lo) * (static_cast<double>(j) / bin_count);
  }
  std::vector<int> bin_of(values.size());
  std::vector<long> counts(bin_count, 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int b = static_cast<int>(
        std::upper_bound(edges.begin(), edges.end(), values[i]) - edges.begin());
    bin_of[i] = b;
    ++counts[b];
  }

  std::vector<int> group_of_bin(bin_count);
  std::vector<long> group_size;
  for (int b = 0; b < bin_count; ++b) {
    if (counts[b] < merge_threshold && !group_size.empty()) {
      group_of_bin[b] = static_cast<int>(group_size.size()) - 1;
      group_size.back() += counts[b];
    } else {
      group_of_bin[b] = static_cast<int>(group_size.size());
      group_size.push_back(counts[b]);
    }
  }
  // The leftmost group has no left neighbour; if still underfull it joins
  // the next group to the right.
  if (group_size.size() > 1 && group_size[0] < merge_threshold) {
    for (int& g : group_of_bin) g = std::max(0, g - 1);
    group_size[1] += group_size[0];
    group_size.erase(group_size.begin());
  }

  std::vector<int> dense(group_size.size(), -1);
  int next = 0;
  for (std::size_t g = 0; g < group_size.size(); ++g) {
    if (group_size[g] > 0) dense[g] = next++;
  }
  std::vector<int> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = dense[group_of_bin[bin_of[i]]];
  }
  return out;
}

AcuityTable build_acuity_table(const VisualField& field,
                               const AcuityParams& params, int bin_count,
                               int merge_threshold) {
  params.validate();
  if (bin_count < 2) throw ConfigError("bin count must be >= 2");
  if (merge_threshold < 0) throw ConfigError("merge threshold must be >= 0");

  const int w = field.width();
  std::vector<double> color(w + 1);
  std::vector<double> gray(w + 1);
  for (int d = 0; d <= w; ++d) {
    const double e = static_cast<double>(d) / w;
    color[d] = photopic_acuity(e, params);
    gray[d] = scotopic_acuity(e, params);
  }
  ChannelTable color_table = build_channel(std::move(color), w, params.beta,
                                           bin_count, merge_threshold, "color");
  ChannelTable gray_table = build_channel(std::move(gray), w, params.beta,
                                          bin_count, merge_threshold, "gray");
  return AcuityTable(w, params, bin_count, merge_threshold,
                     std::move(color_table), std::move(gray_table));
}

AcuityTable apply_viewing_distance(const AcuityTable& table, int k) {
  if (k < 0) throw ConfigError("viewing distance must be >= 0");
  const double beta = table.params_.beta;
  AcuityTable out = table;
  out.color_ = shift_channel(table.color_, k, table.field_width_, beta);
  out.gray_ = shift_channel(table.gray_, k, table.field_width_, beta);
  out.viewing_distance_ = table.viewing_distance_ + k;
  return out;
}

void write_table_dump(std::ostream& out, const AcuityTable& table) {
  out << "# field_width=" << table.field_width()
      << " bins=" << table.bin_count()
      << " merge_threshold=" << table.merge_threshold()
      << " viewing_distance=" << table.viewing_distance()
      << " envelope=" << to_string(table.params().norm)
      << " color_bins=" << table.color().bins.size()
      << " gray_bins=" << table.gray().bins.size() << "\n";
  out << "distance\tD_C_q\tD_R_q\tsigma_color\tsigma_gray\n";
  char line[160];
  for (int d = 0; d <= table.field_width(); ++d) {
    std::snprintf(line, sizeof(line), "%d\t%.12g\t%.12g\t%.12g\t%.12g\n", d,
                  table.color_acuity(d), table.gray_acuity(d),
                  table.sigma(Channel::kColor, d),
                  table.sigma(Channel::kGray, d));
    out << line;
  }
}

}  // namespace rblur
