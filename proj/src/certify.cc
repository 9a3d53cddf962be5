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

#include "rblur/certify.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include <boost/math/special_functions/beta.hpp>

#include "rblur/errors.h"
#include "rblur/random.h"

namespace rblur {
namespace {

constexpr long kBlockSize = 1024;
constexpr std::uint64_t kSelectionDomain = 1;
constexpr std::uint64_t kEstimationDomain = 2;
constexpr std::uint64_t kWrapperNoiseDomain = 7;

double dot(std::span<const float> x, const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i];
  return s;
}

void check_length(const Image& img, std::size_t expected) {
  if (img.size() != expected) {
    throw InputError("classifier expects " + std::to_string(expected) +
                     " samples, image has " + std::to_string(img.size()));
  }
}

// Votes per class for `samples` noisy copies of x.
std::vector<long> sample_votes(const Classifier& clf, const Image& x,
                               double sigma, long samples, std::uint64_t seed,
                               std::uint64_t domain, int threads) {
  const int classes = clf.num_classes();
  const long blocks = (samples + kBlockSize - 1) / kBlockSize;
  std::atomic<long> next_block{0};

  auto worker = [&](std::vector<long>& votes) {
    Image noisy = x;
    std::normal_distribution<double> noise(0.0, sigma);
    const std::span<const float> clean = x.samples();
    const std::span<float> buf = noisy.samples();
    for (long b = next_block++; b < blocks; b = next_block++) {
      Rng rng = derive_stream(seed, static_cast<std::uint64_t>(b), domain);
      const long end = std::min(samples, (b + 1) * kBlockSize);
      for (long s = b * kBlockSize; s < end; ++s) {
        for (std::size_t i = 0; i < buf.size(); ++i) {
          buf[i] = static_cast<float>(clean[i] + noise(rng));
        }
        ++votes[clf.predict(noisy)];
      }
    }
  };

  const int workers = static_cast<int>(
      std::clamp<long>(threads, 1, std::max<long>(1, blocks)));
  std::vector<std::vector<long>> partial(workers, std::vector<long>(classes, 0));
  if (workers == 1) {
    worker(partial[0]);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back(worker, std::ref(partial[t]));
    }
    for (std::thread& t : pool) t.join();
  }
  std::vector<long> votes(classes, 0);
  for (const auto& p : partial) {
    for (int c = 0; c < classes; ++c) votes[c] += p[c];
  }
  return votes;
}

std::uint64_t item_seed(std::uint64_t seed, std::size_t index) {
  Rng rng = derive_stream(seed, index, 0);
  return rng();
}

}  // namespace

double clopper_pearson_lower(long k, long n, double alpha) {
  if (n < 1 || k < 0 || k > n) throw InputError("need 0 <= k <= n and n >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must be in (0, 1)");
  if (k == 0) return 0.0;
  // P(Bin(n, p) >= k) = I_p(k, n - k + 1).
  return boost::math::ibeta_inv(static_cast<double>(k),
                                static_cast<double>(n - k + 1), alpha);
}

double std_normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("quantile needs 0 < p < 1");
  // Acklam's rational approximation (relative error < 1.2e-9).
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Newton step on Phi(x) - p.
  const double density =
      std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  if (density > 0.0) x -= (std_normal_cdf(x) - p) / density;
  return x;
}

int Classifier::predict(const Image& img) const {
  const std::vector<double> s = scores(img);
  return static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
}

ConstantClassifier::ConstantClassifier(int label, int num_classes)
    : label_(label), num_classes_(num_classes) {
  if (num_classes < 1 || label < 0 || label >= num_classes) {
    throw ConfigError("constant classifier label out of range");
  }
}

std::vector<double> ConstantClassifier::scores(const Image&) const {
  std::vector<double> s(num_classes_, 0.0);
  s[label_] = 1.0;
  return s;
}

LinearClassifier::LinearClassifier(std::vector<std::vector<double>> weights,
                                   std::vector<double> bias)
    : weights_(std::move(weights)), bias_(std::move(bias)) {
  if (weights_.empty()) throw ConfigError("linear classifier needs a class");
  if (bias_.size() != weights_.size()) {
    throw ConfigError("linear classifier bias count differs from class count");
  }
  for (const auto& w : weights_) {
    if (w.size() != weights_.front().size() || w.empty()) {
      throw ConfigError("linear classifier weight rows differ in length");
    }
  }
}

std::vector<double> LinearClassifier::scores(const Image& img) const {
  check_length(img, weights_.front().size());
  std::vector<double> s(weights_.size());
  for (std::size_t c = 0; c < weights_.size(); ++c) {
    s[c] = dot(img.samples(), weights_[c]) + bias_[c];
  }
  return s;
}

NearestCentroidClassifier::NearestCentroidClassifier(
    std::vector<std::vector<double>> centroids)
    : centroids_(std::move(centroids)) {
  if (centroids_.empty()) throw ConfigError("nearest-centroid needs a class");
  for (const auto& m : centroids_) {
    if (m.size() != centroids_.front().size() || m.empty()) {
      throw ConfigError("centroids differ in length");
    }
  }
}

std::vector<double> NearestCentroidClassifier::scores(const Image& img) const {
  check_length(img, centroids_.front().size());
  const std::span<const float> x = img.samples();
  std::vector<double> s(centroids_.size());
  for (std::size_t c = 0; c < centroids_.size(); ++c) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - centroids_[c][i];
      d2 += d * d;
    }
    s[c] = -d2;
  }
  return s;
}

RBlurWrappedClassifier::RBlurWrappedClassifier(
    std::shared_ptr<const Classifier> base, const RBlurConfig& config,
    Scanpath fixations)
    : base_(std::move(base)), foveator_(config), fixations_(std::move(fixations)) {
  if (!base_) throw ConfigError("wrapped classifier is null");
  if (fixations_.empty()) throw ConfigError("wrapped classifier needs a fixation");
}

std::vector<double> RBlurWrappedClassifier::scores(const Image& img) const {
  Rng rng = derive_stream(foveator_.config().seed, 0, kWrapperNoiseDomain);
  const Image noisy = add_gaussian_noise(img, foveator_.config().noise_scale, rng);
  std::vector<std::vector<double>> per_fixation;
  per_fixation.reserve(fixations_.size());
  for (const FixationPoint& f : fixations_) {
    per_fixation.push_back(base_->scores(foveator_.foveate(noisy, f)));
  }
  return aggregate_scores(per_fixation);
}

std::unique_ptr<Classifier> RBlurWrappedClassifier::for_certification() const {
  RBlurConfig quiet = foveator_.config();
  quiet.noise_scale = 0.0;
  return std::make_unique<RBlurWrappedClassifier>(base_, quiet, fixations_);
}

void CertifyParams::validate() const {
  if (!std::isfinite(sigma) || sigma <= 0.0) throw ConfigError("sigma must be > 0");
  if (n0 < 1 || n < 1) throw ConfigError("sample counts must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0, 1)");
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

CertificationResult certify(const Classifier& clf, const Image& x,
                            const CertifyParams& params, std::uint64_t seed) {
  params.validate();
  const std::unique_ptr<Classifier> quiet = clf.for_certification();
  const Classifier& model = quiet ? *quiet : clf;

  const std::vector<long> selection = sample_votes(
      model, x, params.sigma, params.n0, seed, kSelectionDomain, params.threads);
  const int candidate = static_cast<int>(
      std::max_element(selection.begin(), selection.end()) - selection.begin());
  const std::vector<long> estimation = sample_votes(
      model, x, params.sigma, params.n, seed, kEstimationDomain, params.threads);

  CertificationResult result;
  result.candidate_class = candidate;
  result.candidate_count = estimation[candidate];
  result.n0 = params.n0;
  result.n = params.n;
  result.p_lower =
      clopper_pearson_lower(result.candidate_count, params.n, params.alpha);
  if (result.p_lower > 0.5) {
    result.abstained = false;
    result.predicted_class = candidate;
    result.radius = params.sigma * std_normal_quantile(result.p_lower);
  }
  return result;
}

double certified_radius_ceiling(const CertifyParams& params) {
  params.validate();
  const double p = std::exp(std::log(params.alpha) / static_cast<double>(params.n));
  return params.sigma * std_normal_quantile(p);
}

std::vector<CertificationResult> certify_dataset(
    const Classifier& clf, std::span<const LabeledImage> dataset,
    const CertifyParams& params, std::uint64_t seed) {
  std::vector<CertificationResult> results;
  results.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    results.push_back(certify(clf, dataset[i].image, params, item_seed(seed, i)));
  }
  return results;
}

double certified_accuracy(std::span<const CertificationResult> results,
                          std::span<const LabeledImage> dataset, double radius) {
  if (dataset.empty()) throw InputError("empty dataset");
  if (results.size() != dataset.size()) {
    throw InputError("result count differs from dataset size");
  }
  long hits = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const CertificationResult& r = results[i];
    if (!r.abstained && r.predicted_class == dataset[i].label && r.radius >= radius) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(dataset.size());
}

double certified_accuracy(const Classifier& clf,
                          std::span<const LabeledImage> dataset, double radius,
                          const CertifyParams& params, std::uint64_t seed) {
  if (dataset.empty()) throw InputError("empty dataset");
  const auto results = certify_dataset(clf, dataset, params, seed);
  return certified_accuracy(results, dataset, radius);
}

MatchedComparison compare_matched_unmatched(
    const Classifier& clf, std::span<const LabeledImage> dataset,
    double training_sigma, std::span<const double> radii, CertifyParams params,
    std::uint64_t seed) {
  MatchedComparison out;
  out.matched_sigma = training_sigma;
  out.unmatched_sigma = 2.0 * training_sigma;
  out.radii.assign(radii.begin(), radii.end());

  params.sigma = out.matched_sigma;
  const auto matched = certify_dataset(clf, dataset, params, seed);
  params.sigma = out.unmatched_sigma;
  const auto unmatched = certify_dataset(clf, dataset, params, seed);
  for (double r : radii) {
    out.matched.push_back(certified_accuracy(matched, dataset, r));
    out.unmatched.push_back(certified_accuracy(unmatched, dataset, r));
  }
  return out;
}

}  // namespace rblur
