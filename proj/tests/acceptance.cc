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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.h"
#include "rblur/acuity.h"
#include "rblur/certify.h"
#include "rblur/cli.h"
#include "rblur/errors.h"
#include "rblur/fixation.h"
#include "rblur/foveate.h"
#include "rblur/image_io.h"
#include "scratch_dir.h"

namespace rblur {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double time_limit_s,
               const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = elapsed < time_limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("[%s] %2d %-28s %s; %.2fs (limit %gs)%s\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), o.detail.c_str(), elapsed, time_limit_s,
              in_time ? "" : " TOO SLOW");
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

Outcome max_sigma_anchor() {
  const AcuityTable base = build_acuity_table(VisualField(224), AcuityParams{});
  const AcuityTable shifted = apply_viewing_distance(base, 3);
  const double s = base.color().max_sigma();
  return {s >= 10.5 && s <= 11.2,
          "max color sigma " + fmt("%.4f", s) + " in [10.5, 11.2] (after k=3: " +
              fmt("%.4f", shifted.color().max_sigma()) + ")"};
}

Outcome in_focus_anchor() {
  const AcuityTable t =
      apply_viewing_distance(build_acuity_table(VisualField(224), AcuityParams{}), 3);
  const int w = t.in_focus_width();
  return {std::abs(w - 48) <= 4, "k=3 in-focus side " + std::to_string(w) + " (48 +/- 4)"};
}

Outcome certification_ceiling() {
  const ConstantClassifier clf(0, 10);
  CertifyParams p;
  p.n = 100000;
  p.alpha = 0.001;
  const CertificationResult r = certify(clf, Image(1, 16, 16, 0.5f), p, 1);
  const double ratio = r.radius / p.sigma;
  const double analytic = std_normal_quantile(std::pow(0.001, 1e-5));
  return {!r.abstained && ratio >= 3.7 && ratio <= 3.95 && std::abs(ratio - analytic) < 1e-9,
          "r/sigma " + fmt("%.6f", ratio) + " (analytic " + fmt("%.6f", analytic) +
              ") in [3.7, 3.95]"};
}

Outcome certification_soundness() {
  // Class 1 iff u.x + b > 0 with |u| = 1, so m = u.x + b is the signed L2
  // distance to the decision boundary.
  const LinearClassifier clf({{0, 0, 0, 0}, {0.5, 0.5, 0.5, 0.5}}, {0.0, -1.0});
  CertifyParams p;
  p.sigma = 0.125;
  p.n0 = 100;
  p.n = 100000;
  p.alpha = 0.001;
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int exceed = 0, wrong = 0, abstained = 0;
  double worst_z = 0.0;
  double sum_r = 0.0, sum_m = 0.0;
  const int inputs = 200;
  for (int i = 0; i < inputs; ++i) {
    const double target = (unit(gen) < 0.5 ? -1 : 1) * p.sigma * (1.0 + 1.5 * unit(gen));
    Image x(1, 2, 2);
    double base = 0.0;
    for (int k = 0; k < 3; ++k) {
      x.samples()[k] = static_cast<float>(unit(gen));
      base += 0.5 * x.samples()[k];
    }
    x.samples()[3] = static_cast<float>(2.0 * (target + 1.0 - base));
    double m = -1.0;
    for (float v : x.samples()) m += 0.5 * double(v);
    const CertificationResult r = certify(clf, x, p, 500 + i);
    if (r.abstained) {
      ++abstained;
      continue;
    }
    if (r.predicted_class != (m > 0 ? 1 : 0)) ++wrong;
    if (r.radius > std::abs(m)) {
      ++exceed;
      // How far the vote count sat above its expectation, in sd units.
      const double pa = std_normal_cdf(std::abs(m) / p.sigma);
      worst_z = std::max(worst_z, (r.candidate_count - p.n * pa) /
                                      std::sqrt(p.n * pa * (1.0 - pa)));
    }
    sum_r += r.radius;
    sum_m += std::abs(m);
  }
  const double frac = double(exceed + wrong) / inputs;
  const double rel = std::abs(sum_r - sum_m) / sum_m;
  return {frac <= 3 * p.alpha && rel <= 0.05 && abstained == 0,
          std::to_string(exceed) + " radii over margin, " + std::to_string(wrong) +
              " wrong, " + std::to_string(abstained) + " abstained of 200 (limit " +
              fmt("%.3f", 3 * p.alpha) + ")" +
              (exceed ? ", worst vote count +" + fmt("%.2f", worst_z) + " sd" : "") +
              "; mean radius off by " + fmt("%.2f", 100 * rel) + "% (limit 5%)"};
}

Outcome blur_oracle() {
  std::mt19937_64 gen(55);
  std::uniform_real_distribution<double> beta_dist(0.05, 0.15);
  std::uniform_int_distribution<int> pos(0, 63), bins(4, 24);
  double worst = 0.0;
  double moved = 0.0;
  for (int i = 0; i < 50; ++i) {
    RBlurConfig cfg;
    cfg.field_width = 64;
    cfg.acuity.beta = beta_dist(gen);
    cfg.bin_count = bins(gen);
    cfg.merge_threshold = 0;
    cfg.viewing_distance = 0;
    const Foveator fov(cfg);
    const Channel ch = i % 2 ? Channel::kGray : Channel::kColor;
    const Image img = oracle::random_image(ch == Channel::kGray ? 1 : 3, 64, 64, gen);
    const FixationPoint f{pos(gen), pos(gen)};
    const EccentricityMap emap = eccentricity_map(f, fov.field(), 64, 64);
    const Image got = adaptive_blur(img, fov.table(), emap, ch);
    const Image want = oracle::gather_blur(
        img, [&](int y, int x) { return fov.table().sigma(ch, emap.distance(y, x)); });
    worst = std::max(worst, max_abs_diff(got, want));
    moved += max_abs_diff(got, img) / 50;
  }
  return {worst <= 1e-5, "max |adaptive - oracle| " + fmt("%.3g", worst) +
                             " over 50 images (mean max |blur - input| " +
                             fmt("%.3f", moved) + ")"};
}

Outcome quantizer_oracle() {
  std::mt19937 gen(606);
  int matched = 0;
  std::string first_mismatch;
  for (int trial = 0; trial < 100; ++trial) {
    const int w = std::uniform_int_distribution<int>(2, 64)(gen);
    const int b = std::uniform_int_distribution<int>(2, 48)(gen);
    const int tau = std::uniform_int_distribution<int>(0, 6)(gen);
    AcuityParams p;
    p.beta = std::uniform_real_distribution<double>(0.01, 0.2)(gen);
    std::vector<double> raw_c, raw_r;
    for (int d = 0; d <= w; ++d) {
      const double e = static_cast<double>(d) / w;
      raw_c.push_back(oracle::envelope(e, p.sigma_color, p.alpha, false));
      raw_r.push_back(p.p_max * (1.0 - oracle::envelope(e, p.sigma_rod, p.alpha, false)));
    }
    const oracle::Quantized qc = oracle::quantize(raw_c, b, tau);
    const oracle::Quantized qr = oracle::quantize(raw_r, b, tau);
    const bool expect_error = qc.groups < 2 || qr.groups < 2;
    bool ok = true;
    try {
      const AcuityTable t = build_acuity_table(VisualField(w), p, b, tau);
      ok = !expect_error;
      // Group ids differ (value order vs. eccentricity order), so compare
      // the partitions pairwise.
      for (int d = 0; ok && d <= w; ++d) {
        ok = t.color_acuity(d) == qc.value[d] && t.gray_acuity(d) == qr.value[d] &&
             t.sigma(Channel::kColor, d) == p.beta * w * (1.0 - qc.value[d]) &&
             t.sigma(Channel::kGray, d) == p.beta * w * (1.0 - qr.value[d]);
        for (int e = 0; ok && e <= w; ++e) {
          ok = (t.color().bin_of_distance[d] == t.color().bin_of_distance[e]) ==
                   (qc.group[d] == qc.group[e]) &&
               (t.gray().bin_of_distance[d] == t.gray().bin_of_distance[e]) ==
                   (qr.group[d] == qr.group[e]);
        }
      }
    } catch (const ConfigError&) {
      ok = expect_error;
    }
    if (ok) {
      ++matched;
    } else if (first_mismatch.empty()) {
      first_mismatch = " first mismatch W=" + std::to_string(w) + " B=" + std::to_string(b) +
                       " tau=" + std::to_string(tau);
    }
  }
  return {matched == 100, std::to_string(matched) + "/100 configurations identical" +
                              first_mismatch};
}

Outcome monotonicity() {
  const AcuityParams p;
  int violations = 0;
  double prev_c = photopic_acuity(0.0, p), prev_r = scotopic_acuity(0.0, p);
  for (int i = 1; i < 10000; ++i) {
    const double e = i / 9999.0;
    const double c = photopic_acuity(e, p), r = scotopic_acuity(e, p);
    violations += (c > prev_c) + (r < prev_r);
    prev_c = c;
    prev_r = r;
  }
  const AcuityTable base = build_acuity_table(VisualField(224), p);
  int k_violations = 0;
  bool gray_rises = true;
  for (int k = 1; k <= 6; ++k) {
    const AcuityTable a = apply_viewing_distance(base, k - 1);
    const AcuityTable b = apply_viewing_distance(base, k);
    for (int d = 0; d <= 224; ++d) {
      k_violations += b.sigma(Channel::kColor, d) > a.sigma(Channel::kColor, d);
      gray_rises = gray_rises && b.sigma(Channel::kGray, d) >= a.sigma(Channel::kGray, d);
    }
  }
  return {violations == 0 && k_violations == 0,
          std::to_string(violations) + " curve violations on 1e4 grid, " +
              std::to_string(k_violations) + " color sigma increases over k=0..6 (gray sigma " +
              (gray_rises ? "non-decreasing" : "mixed") + ")"};
}

Outcome identity_stack() {
  std::mt19937_64 gen(88);
  RBlurConfig cfg;
  cfg.noise_scale = 0.0;
  cfg.acuity.beta = 0.0;
  cfg.acuity.p_max = 0.0;
  const Foveator fov(cfg);
  std::uniform_int_distribution<int> pos(0, 223), size(8, 96);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int h = size(gen), w = size(gen);
    const Image img = oracle::random_image(i % 2 ? 1 : 3, h, w, gen);
    Rng rng = derive_stream(i, 0, 0);
    const FixationPoint f{pos(gen) % w, pos(gen) % h};
    worst = std::max(worst, max_abs_diff(rblur(img, f, cfg, rng), img));
    worst = std::max(worst, max_abs_diff(fov.foveate(img, f), img));
  }
  return {worst <= 1e-6, "max |out - in| " + fmt("%.3g", worst) + " over 20 images"};
}

Outcome determinism() {
  testing::ScratchDir dir;
  std::mt19937_64 gen(99);
  std::vector<std::string> inputs;
  for (int i = 0; i < 6; ++i) {
    const auto path = dir / ("in" + std::to_string(i) + ".png");
    write_image(path, oracle::random_image(3, 64, 64, gen));
    inputs.push_back(path.string());
  }
  auto run_apply = [&](const std::string& out, int jobs) {
    std::vector<std::string> args = {"apply"};
    args.insert(args.end(), inputs.begin(), inputs.end());
    for (const std::string& s : {std::string("-o"), (dir / out).string(), std::string("-j"),
                                 std::to_string(jobs), std::string("--seed"),
                                 std::string("1234"), std::string("--fixation"),
                                 std::string("5,5;40,20")}) {
      args.push_back(s);
    }
    std::ostringstream o, e;
    return run_cli(args, o, e);
  };
  const int codes = run_apply("a", 1) | run_apply("b", 1) | run_apply("c", 4);
  int files = 0, identical = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir / "a")) {
    if (entry.path().extension() != ".png") continue;
    ++files;
    const auto name = entry.path().filename();
    const auto a = read_file(entry.path());
    identical += a == read_file(dir / "b" / name) && a == read_file(dir / "c" / name);
  }
  return {codes == 0 && files == 12 && identical == files,
          std::to_string(identical) + "/" + std::to_string(files) +
              " PNGs byte-identical across runs and --jobs 1/4"};
}

Outcome scanpath_contract() {
  std::mt19937_64 gen(1010);
  std::uniform_int_distribution<int> dim(5, 40);
  std::uniform_real_distribution<double> weight(1e-3, 1.0);
  int bad_paths = 0;
  for (int i = 0; i < 1000; ++i) {
    const int h = dim(gen), w = dim(gen);
    std::vector<double> v(static_cast<std::size_t>(h) * w);
    for (double& x : v) x = weight(gen);
    Rng rng = derive_stream(i, 0, 3);
    const Scanpath p = sample_scanpath(Heatmap(h, w, v), 5, default_mask_sigma(w), rng);
    std::set<std::pair<int, int>> seen;
    bool ok = p.size() == 5;
    for (const FixationPoint& q : p) {
      ok = ok && q.x >= 0 && q.x < w && q.y >= 0 && q.y < h && seen.insert({q.x, q.y}).second;
    }
    bad_paths += !ok;
  }
  int hot_misses = 0;
  for (int i = 0; i < 1000; ++i) {
    const int h = dim(gen), w = dim(gen);
    std::vector<double> v(static_cast<std::size_t>(h) * w, 0.0);
    const int hot = std::uniform_int_distribution<int>(0, h * w - 1)(gen);
    v[hot] = 1.0;
    Rng rng = derive_stream(i, 1, 3);
    const FixationPoint first = sample_scanpath(Heatmap(h, w, v), 1, 2.0, rng)[0];
    hot_misses += first.y * w + first.x != hot;
  }
  return {bad_paths == 0 && hot_misses == 0,
          std::to_string(bad_paths) + " invalid of 1000 scanpaths, " +
              std::to_string(hot_misses) + " one-hot misses of 1000"};
}

}  // namespace
}  // namespace rblur

int main() {
  using namespace rblur;
  criterion(1, "max-sigma anchor", 1.0, max_sigma_anchor);
  criterion(2, "in-focus width anchor", 1.0, in_focus_anchor);
  criterion(3, "certification ceiling", 30.0, certification_ceiling);
  criterion(4, "certification soundness", 120.0, certification_soundness);
  criterion(5, "blur oracle equivalence", 60.0, blur_oracle);
  criterion(6, "quantizer oracle equivalence", 60.0, quantizer_oracle);
  criterion(7, "monotonicity", 60.0, monotonicity);
  criterion(8, "identity stack", 60.0, identity_stack);
  criterion(9, "apply determinism", 60.0, determinism);
  criterion(10, "scanpath contract", 60.0, scanpath_contract);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
