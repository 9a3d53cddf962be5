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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "oracles.h"
#include "rblur/errors.h"

namespace rblur {
namespace {

AcuityParams clamped() {
  AcuityParams p;
  p.norm = EnvelopeNorm::kClamp;
  return p;
}

TEST(AcuityEnvelope, PeakIsOne) {
  EXPECT_DOUBLE_EQ(acuity_envelope(0.0, 0.12, 2.5, EnvelopeNorm::kClamp), 1.0);
  EXPECT_DOUBLE_EQ(acuity_envelope(0.0, 0.12, 2.5, EnvelopeNorm::kPeak), 1.0);
}

TEST(AcuityEnvelope, VanishesFarOut) {
  EXPECT_LT(acuity_envelope(1e6, 0.12, 2.5, EnvelopeNorm::kClamp), 1e-6);
  EXPECT_LT(acuity_envelope(1e6, 0.12, 2.5, EnvelopeNorm::kPeak), 1e-6);
}

TEST(AcuityEnvelope, CauchyTailDominatesAtPointThree) {
  // Hand evaluation: Laplace 4.1667 * e^-2.5 = 0.3420, Cauchy
  // (1 / (pi * 0.3)) / 2 = 0.5305.
  EXPECT_NEAR(acuity_envelope(0.3, 0.12, 2.5, EnvelopeNorm::kClamp),
              0.5305164769729844, 1e-12);
  EXPECT_NEAR(acuity_envelope(0.3, 0.12, 2.5, EnvelopeNorm::kClamp),
              oracle::cauchy_pdf(0.3, 0.3), 1e-15);
  // Peak-normalized: divide by the Laplace peak 1 / 0.24.
  EXPECT_NEAR(acuity_envelope(0.3, 0.12, 2.5, EnvelopeNorm::kPeak),
              0.12732395447351624, 1e-12);
}

TEST(AcuityEnvelope, MatchesDirectDensityEvaluation) {
  for (double e = 0.0; e < 3.0; e += 0.0137) {
    for (double s : {0.05, 0.09, 0.12, 0.3}) {
      EXPECT_NEAR(acuity_envelope(e, s, 2.5, EnvelopeNorm::kClamp),
                  oracle::envelope(e, s, 2.5, true), 1e-14);
      EXPECT_NEAR(acuity_envelope(e, s, 2.5, EnvelopeNorm::kPeak),
                  oracle::envelope(e, s, 2.5, false), 1e-14);
    }
  }
}

TEST(AcuityEnvelope, RejectsNonFinite) {
  EXPECT_THROW(acuity_envelope(NAN, 0.12, 2.5), InputError);
  EXPECT_THROW(acuity_envelope(-0.1, 0.12, 2.5), InputError);
  EXPECT_THROW(acuity_envelope(0.1, 0.0, 2.5), InputError);
  EXPECT_THROW(acuity_envelope(0.1, 0.12, INFINITY), InputError);
}

TEST(PhotopicScotopic, ValuesAtFixation) {
  for (const AcuityParams& p : {AcuityParams{}, clamped()}) {
    EXPECT_DOUBLE_EQ(photopic_acuity(0.0, p), 1.0);
    EXPECT_DOUBLE_EQ(scotopic_acuity(0.0, p), 0.0);
    EXPECT_NEAR(scotopic_acuity(1e7, p), p.p_max, 1e-9);
  }
}

TEST(PhotopicScotopic, ClampedColorAtHalf) {
  // Cauchy branch: (1 / (pi * 0.3)) / (1 + (0.5 / 0.3)^2) = 1.06103 / 3.77778.
  EXPECT_NEAR(photopic_acuity(0.5, clamped()), 0.2808616642798153, 1e-12);
  EXPECT_NEAR(photopic_acuity(0.5, AcuityParams{}), 0.06740679942715566, 1e-12);
}

TEST(PhotopicScotopic, MonotoneAndPositiveDenominator) {
  for (const AcuityParams& p : {AcuityParams{}, clamped()}) {
    double prev_c = photopic_acuity(0.0, p);
    double prev_r = scotopic_acuity(0.0, p);
    for (int i = 1; i <= 10000; ++i) {
      const double e = 2.0 * i / 10000.0;
      const double c = photopic_acuity(e, p);
      const double r = scotopic_acuity(e, p);
      EXPECT_LE(c, prev_c);
      EXPECT_GE(r, prev_r);
      EXPECT_GT(c + r, 0.0);
      EXPECT_LE(r, p.p_max);
      prev_c = c;
      prev_r = r;
    }
  }
}

TEST(Histogram, SeparatesEveryValueWhenBinsAreFine) {
  const VisualField field(224);
  const AcuityTable t = build_acuity_table(field, AcuityParams{}, 2000000, 0);
  for (int d = 0; d <= 224; ++d) {
    EXPECT_EQ(t.color_acuity(d), t.color().raw[d]) << d;
    EXPECT_EQ(t.gray_acuity(d), t.gray().raw[d]) << d;
  }
  EXPECT_EQ(t.color().bins.size(), 225u);
}

void expect_matches_oracle(const AcuityTable& t, const AcuityParams& params,
                           int bins, int tau) {
  const int w = t.field_width();
  for (Channel ch : {Channel::kColor, Channel::kGray}) {
    const ChannelTable& c = t.channel(ch);
    const oracle::Quantized q = oracle::quantize(c.raw, bins, tau);
    ASSERT_EQ(static_cast<int>(c.bins.size()), q.groups);
    for (int d = 0; d <= w; ++d) {
      EXPECT_EQ(c.acuity[d], q.value[d]) << "d=" << d;
      EXPECT_EQ(c.sigma[d], std::max(0.0, params.beta * w * (1.0 - q.value[d])));
      for (int e = 0; e <= w; ++e) {
        EXPECT_EQ(c.bin_of_distance[d] == c.bin_of_distance[e], q.group[d] == q.group[e]);
      }
    }
  }
}

TEST(BuildAcuityTable, SmallFieldMatchesBruteForceQuantizer) {
  const AcuityParams p;
  const AcuityTable t = build_acuity_table(VisualField(8), p, 3, 0);
  expect_matches_oracle(t, p, 3, 0);
}

TEST(BuildAcuityTable, RandomConfigsMatchBruteForceQuantizer) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const int w = std::uniform_int_distribution<int>(4, 64)(rng);
    const int bins = std::uniform_int_distribution<int>(2, 40)(rng);
    const int tau = std::uniform_int_distribution<int>(0, 5)(rng);
    AcuityParams p;
    p.norm = trial % 2 ? EnvelopeNorm::kClamp : EnvelopeNorm::kPeak;
    try {
      const AcuityTable t = build_acuity_table(VisualField(w), p, bins, tau);
      expect_matches_oracle(t, p, bins, tau);
    } catch (const ConfigError&) {
      std::vector<double> raw;
      for (int d = 0; d <= w; ++d) raw.push_back(photopic_acuity(double(d) / w, p));
      std::vector<double> gray;
      for (int d = 0; d <= w; ++d) gray.push_back(scotopic_acuity(double(d) / w, p));
      EXPECT_TRUE(oracle::quantize(raw, bins, tau).groups < 2 ||
                  oracle::quantize(gray, bins, tau).groups < 2);
    }
  }
}

TEST(BuildAcuityTable, InvariantsHold) {
  const AcuityTable t = build_acuity_table(VisualField(224), AcuityParams{});
  for (Channel ch : {Channel::kColor, Channel::kGray}) {
    const ChannelTable& c = t.channel(ch);
    EXPECT_EQ(c.bins.front().first_distance, 0);
    EXPECT_EQ(c.bins.back().last_distance, 224);
    for (std::size_t b = 0; b < c.bins.size(); ++b) {
      const AcuityBin& bin = c.bins[b];
      if (b > 0) EXPECT_EQ(bin.first_distance, c.bins[b - 1].last_distance + 1);
      double lo = 1e9, hi = -1e9;
      for (int d = bin.first_distance; d <= bin.last_distance; ++d) {
        lo = std::min(lo, c.raw[d]);
        hi = std::max(hi, c.raw[d]);
      }
      EXPECT_GE(bin.acuity, lo);
      EXPECT_LE(bin.acuity, hi);
      EXPECT_GE(bin.sigma, 0.0);
      EXPECT_LE(bin.sigma, 0.05 * 224 + 1e-12);
    }
    for (int d = 1; d <= 224; ++d) {
      if (ch == Channel::kColor) {
        EXPECT_LE(c.acuity[d], c.acuity[d - 1]);
      } else {
        EXPECT_GE(c.acuity[d], c.acuity[d - 1]);
      }
    }
  }
}

TEST(BuildAcuityTable, DefaultCalibration) {
  // Frozen from an independent prototype of the quantizer.
  const AcuityTable base = build_acuity_table(VisualField(224), AcuityParams{});
  EXPECT_NEAR(base.color().max_sigma(), 10.847783812511086, 1e-9);
  EXPECT_EQ(base.color().bins.size(), 18u);
  const int widths[] = {25, 37, 45, 49, 55, 59, 63};
  for (int k = 0; k <= 6; ++k) {
    EXPECT_EQ(apply_viewing_distance(base, k).in_focus_width(), widths[k]) << k;
  }
  EXPECT_NEAR(apply_viewing_distance(base, 3).color().max_sigma(), 9.954585728377872,
              1e-9);
}

TEST(BuildAcuityTable, Deterministic) {
  const AcuityTable a = build_acuity_table(VisualField(100), AcuityParams{}, 20, 3);
  const AcuityTable b = build_acuity_table(VisualField(100), AcuityParams{}, 20, 3);
  for (int d = 0; d <= 100; ++d) {
    EXPECT_EQ(a.color_acuity(d), b.color_acuity(d));
    EXPECT_EQ(a.gray_acuity(d), b.gray_acuity(d));
    EXPECT_EQ(a.sigma(Channel::kGray, d), b.sigma(Channel::kGray, d));
  }
}

TEST(BuildAcuityTable, ConfigErrors) {
  EXPECT_THROW(build_acuity_table(VisualField(64), AcuityParams{}, 1, 0), ConfigError);
  EXPECT_THROW(build_acuity_table(VisualField(64), AcuityParams{}, 8, -1), ConfigError);
  EXPECT_THROW(build_acuity_table(VisualField(64), AcuityParams{}, 8, 1000), ConfigError);
  AcuityParams bad;
  bad.sigma_color = -1.0;
  EXPECT_THROW(build_acuity_table(VisualField(64), bad), ConfigError);
  bad = AcuityParams{};
  bad.p_max = 1.5;
  EXPECT_THROW(build_acuity_table(VisualField(64), bad), ConfigError);
}

TEST(BuildAcuityTable, ConstantGrayCurveIsOneBin) {
  AcuityParams p;
  p.p_max = 0.0;
  const AcuityTable t = build_acuity_table(VisualField(64), p, 10, 2);
  EXPECT_EQ(t.gray().bins.size(), 1u);
  EXPECT_EQ(apply_viewing_distance(t, 3).gray().bins.size(), 1u);
}

TEST(ViewingDistance, ZeroIsIdentity) {
  const AcuityTable t = build_acuity_table(VisualField(224), AcuityParams{});
  const AcuityTable s = apply_viewing_distance(t, 0);
  EXPECT_EQ(s.color().acuity, t.color().acuity);
  EXPECT_EQ(s.gray().sigma, t.gray().sigma);
}

// Reference shift: bin i (0-based) takes value index max(0, i - k).
std::vector<double> shifted_reference(const ChannelTable& c, int k) {
  std::vector<double> values;
  for (const AcuityBin& b : c.bins) values.push_back(b.acuity);
  std::vector<double> out(c.acuity.size());
  for (std::size_t d = 0; d < out.size(); ++d) {
    const int i = c.bin_of_distance[d];
    out[d] = values[std::max(0, i - k)];
  }
  return out;
}

TEST(ViewingDistance, SixBinsShiftedByTwo) {
  // Find a configuration with exactly six color bins, then check the
  // per-bin values against [d1, d1, d1, d2, d3, d4].
  for (int bins = 2; bins < 40; ++bins) {
    const AcuityTable t = build_acuity_table(VisualField(64), AcuityParams{}, bins, 0);
    if (t.color().bins.size() != 6) continue;
    const AcuityTable s = apply_viewing_distance(t, 2);
    const auto& b = t.color().bins;
    const double expect[6] = {b[0].acuity, b[0].acuity, b[0].acuity,
                              b[1].acuity, b[2].acuity, b[3].acuity};
    for (int i = 0; i < 6; ++i) {
      for (int d = b[i].first_distance; d <= b[i].last_distance; ++d) {
        EXPECT_EQ(s.color_acuity(d), expect[i]);
      }
    }
    EXPECT_EQ(s.color().bins.size(), 4u);
    return;
  }
  FAIL() << "no six-bin configuration found";
}

TEST(ViewingDistance, MatchesReferenceAndComposes) {
  const AcuityTable t = build_acuity_table(VisualField(224), AcuityParams{});
  for (int k = 0; k < 10; ++k) {
    const AcuityTable s = apply_viewing_distance(t, k);
    EXPECT_EQ(s.color().acuity, shifted_reference(t.color(), k));
    EXPECT_EQ(s.gray().acuity, shifted_reference(t.gray(), k));
    EXPECT_EQ(s.viewing_distance(), k);
    for (int j = 0; j + k < 10; ++j) {
      const AcuityTable twice = apply_viewing_distance(s, j);
      EXPECT_EQ(twice.color().acuity, apply_viewing_distance(t, k + j).color().acuity);
    }
  }
}

TEST(ViewingDistance, MonotoneInK) {
  const AcuityTable t = build_acuity_table(VisualField(224), AcuityParams{});
  AcuityTable prev = t;
  const int kmax = static_cast<int>(
      std::min(t.color().bins.size(), t.gray().bins.size()));
  for (int k = 1; k < kmax; ++k) {
    const AcuityTable s = apply_viewing_distance(t, k);
    for (int d = 0; d <= 224; ++d) {
      EXPECT_GE(s.color_acuity(d), prev.color_acuity(d));
      EXPECT_LE(s.sigma(Channel::kColor, d), prev.sigma(Channel::kColor, d));
    }
    EXPECT_GE(s.in_focus_width(), prev.in_focus_width());
    prev = s;
  }
}

TEST(ViewingDistance, RejectsTooLargeK) {
  const AcuityTable t = build_acuity_table(VisualField(224), AcuityParams{});
  EXPECT_THROW(apply_viewing_distance(t, static_cast<int>(t.gray().bins.size())),
               ConfigError);
  EXPECT_THROW(apply_viewing_distance(t, -1), ConfigError);
}

std::vector<std::vector<double>> parse_dump(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'd') continue;
    std::istringstream f(line);
    std::vector<double> row;
    double v;
    while (f >> v) row.push_back(v);
    rows.push_back(row);
  }
  return rows;
}

TEST(TableDump, IdentityQuantizationReproducesCurves) {
  const AcuityParams p;
  const AcuityTable t = build_acuity_table(VisualField(224), p, 2000000, 0);
  std::ostringstream out;
  write_table_dump(out, t);
  const auto rows = parse_dump(out.str());
  ASSERT_EQ(rows.size(), 225u);
  for (int d = 0; d <= 224; ++d) {
    ASSERT_EQ(rows[d].size(), 5u);
    EXPECT_EQ(rows[d][0], d);
    const double e = d / 224.0;
    EXPECT_NEAR(rows[d][1], oracle::envelope(e, 0.12, 2.5, false), 1e-9);
    EXPECT_NEAR(rows[d][2], 0.12 * (1.0 - oracle::envelope(e, 0.09, 2.5, false)), 1e-9);
    EXPECT_NEAR(rows[d][3], 11.2 * (1.0 - rows[d][1]), 1e-9);
  }
}

}  // namespace
}  // namespace rblur
