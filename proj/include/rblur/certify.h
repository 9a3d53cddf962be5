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

// Randomized-smoothing certification of L2 robustness.
//
// The smoothed classifier g(x) = argmax_c P(f(x + N(0, s^2 I)) = c) is
// estimated by Monte Carlo: n0 samples pick a candidate class, n fresh
// samples count its votes k, and the one-sided Clopper-Pearson bound p_A on
// its probability gives the certified radius s * Phi^-1(p_A) whenever
// p_A > 1/2. Otherwise the certifier abstains.

#ifndef RBLUR_CERTIFY_H_
#define RBLUR_CERTIFY_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rblur/fixation.h"
#include "rblur/foveate.h"
#include "rblur/image.h"

namespace rblur {

// Largest p with P(Binomial(n, p) >= k) <= alpha; 0 when k = 0.
double clopper_pearson_lower(long k, long n, double alpha);

double std_normal_cdf(double z);

// Throws InputError unless 0 < p < 1.
double std_normal_quantile(double p);

// Maps an image to per-class scores. Implementations must be deterministic
// and safe to call concurrently from several threads.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual int num_classes() const = 0;
  virtual std::vector<double> scores(const Image& img) const = 0;

  // Lowest index among tied maxima.
  int predict(const Image& img) const;

  // Variant to use under certification noise, or nullptr to use *this.
  virtual std::unique_ptr<Classifier> for_certification() const { return nullptr; }
};

// Ignores its input.
class ConstantClassifier : public Classifier {
 public:
  ConstantClassifier(int label, int num_classes);
  int num_classes() const override { return num_classes_; }
  std::vector<double> scores(const Image& img) const override;

 private:
  int label_;
  int num_classes_;
};

// scores_c = <w_c, x> + b_c over all samples of x.
class LinearClassifier : public Classifier {
 public:
  LinearClassifier(std::vector<std::vector<double>> weights,
                   std::vector<double> bias);
  int num_classes() const override { return static_cast<int>(weights_.size()); }
  std::vector<double> scores(const Image& img) const override;

  const std::vector<std::vector<double>>& weights() const { return weights_; }
  const std::vector<double>& bias() const { return bias_; }

 private:
  std::vector<std::vector<double>> weights_;
  std::vector<double> bias_;
};

// scores_c = -|x - mu_c|^2.
class NearestCentroidClassifier : public Classifier {
 public:
  explicit NearestCentroidClassifier(std::vector<std::vector<double>> centroids);
  int num_classes() const override { return static_cast<int>(centroids_.size()); }
  std::vector<double> scores(const Image& img) const override;

 private:
  std::vector<std::vector<double>> centroids_;
};

// Foveates the input at each fixation and averages the base classifier's
// scores (one center fixation, five fixations, a grid, ...). Photoreceptor
// noise uses a fixed seed so the same noise applies to every input; the
// certification variant drops it.
class RBlurWrappedClassifier : public Classifier {
 public:
  RBlurWrappedClassifier(std::shared_ptr<const Classifier> base,
                         const RBlurConfig& config, Scanpath fixations);

  int num_classes() const override { return base_->num_classes(); }
  std::vector<double> scores(const Image& img) const override;
  std::unique_ptr<Classifier> for_certification() const override;

  const Foveator& foveator() const { return foveator_; }
  const Scanpath& fixations() const { return fixations_; }

 private:
  std::shared_ptr<const Classifier> base_;
  Foveator foveator_;
  Scanpath fixations_;
};

struct CertifyParams {
  double sigma = 0.125;
  long n0 = 100;
  long n = 100000;
  double alpha = 0.001;
  int threads = 1;

  void validate() const;
};

struct CertificationResult {
  bool abstained = true;
  int predicted_class = -1;  // -1 when abstained
  double radius = 0.0;
  double p_lower = 0.0;
  int candidate_class = -1;
  long candidate_count = 0;  // votes for the candidate among the n samples
  long n0 = 0;
  long n = 0;
};

// Deterministic in `seed`: samples are processed in fixed-size blocks, each
// with its own stream, so the thread count never changes the counts.
CertificationResult certify(const Classifier& clf, const Image& x,
                            const CertifyParams& params, std::uint64_t seed);

// Radius above which no certification with n samples at level alpha can
// succeed: sigma * Phi^-1(alpha^(1/n)).
double certified_radius_ceiling(const CertifyParams& params);

struct LabeledImage {
  Image image;
  int label = 0;
};

// Certifies item i with seed derived from (seed, i).
std::vector<CertificationResult> certify_dataset(
    const Classifier& clf, std::span<const LabeledImage> dataset,
    const CertifyParams& params, std::uint64_t seed);

// Fraction of items certified with the correct class and radius >= r.
double certified_accuracy(std::span<const CertificationResult> results,
                          std::span<const LabeledImage> dataset, double radius);

double certified_accuracy(const Classifier& clf,
                          std::span<const LabeledImage> dataset, double radius,
                          const CertifyParams& params, std::uint64_t seed);

// Certified accuracy at each radius with certification noise equal to the
// training noise (matched) and twice it (unmatched).
struct MatchedComparison {
  double matched_sigma = 0.0;
  double unmatched_sigma = 0.0;
  std::vector<double> radii;
  std::vector<double> matched;
  std::vector<double> unmatched;
};

MatchedComparison compare_matched_unmatched(
    const Classifier& clf, std::span<const LabeledImage> dataset,
    double training_sigma, std::span<const double> radii, CertifyParams params,
    std::uint64_t seed);

}  // namespace rblur

#endif  // RBLUR_CERTIFY_H_
