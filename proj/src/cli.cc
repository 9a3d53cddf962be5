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

#include "rblur/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "rblur/acuity.h"
#include "rblur/certify.h"
#include "rblur/config.h"
#include "rblur/errors.h"
#include "rblur/fixation.h"
#include "rblur/foveate.h"
#include "rblur/image_io.h"
#include "rblur/random.h"

namespace rblur {
namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kImageNoiseDomain = 0;

// Calls fn(i) for i in [0, count) on `jobs` threads. Each index runs exactly
// once; fn must only touch state owned by its index.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
  const int workers = std::clamp(jobs, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

struct PipelineOptions {
  RBlurConfig config;
  std::string envelope = "peak";

  RBlurConfig resolve() const {
    RBlurConfig c = config;
    c.acuity.norm = parse_envelope_norm(envelope);
    c.validate();
    return c;
  }
};

void add_pipeline_options(CLI::App* cmd, PipelineOptions& p) {
  RBlurConfig& c = p.config;
  cmd->add_option("--sigma-color", c.acuity.sigma_color,
                  "Laplace scale of the photopic (color) acuity curve")
      ->capture_default_str();
  cmd->add_option("--sigma-rod", c.acuity.sigma_rod,
                  "Laplace scale of the scotopic (gray) acuity curve")
      ->capture_default_str();
  cmd->add_option("--acuity-alpha", c.acuity.alpha,
                  "Cauchy width multiplier of the acuity curves")
      ->capture_default_str();
  cmd->add_option("--p-max", c.acuity.p_max, "Peak scotopic acuity")
      ->capture_default_str();
  cmd->add_option("--beta", c.acuity.beta, "Acuity to blur-sigma coefficient")
      ->capture_default_str();
  cmd->add_option("--envelope", p.envelope,
                  "Acuity envelope normalization: peak or clamp")
      ->check(CLI::IsMember({"peak", "clamp"}))
      ->capture_default_str();
  cmd->add_option("--field-width", c.field_width,
                  "Visual field width W_V in pixels (largest accepted image side)")
      ->capture_default_str();
  cmd->add_option("--noise-scale", c.noise_scale,
                  "Std. dev. of the photoreceptor noise added before blurring")
      ->capture_default_str();
  cmd->add_option("--viewing-distance", c.viewing_distance,
                  "Shift acuity bins outward by k (in-focus region grows)")
      ->capture_default_str();
  cmd->add_option("--bins", c.bin_count, "Acuity histogram bin count")
      ->capture_default_str();
  cmd->add_option("--merge-threshold", c.merge_threshold,
                  "Histogram bins with fewer members merge into their left neighbour")
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "Master RNG seed")->capture_default_str();
}

struct FixationCliOptions {
  std::string spec = "center";
  FixationSpecOptions spec_options;
};

void add_fixation_options(CLI::App* cmd, FixationCliOptions& f) {
  cmd->add_option("--fixation", f.spec,
                  "x,y[;x,y...] | center | five | grid:N | scanpath:<heatmap>")
      ->capture_default_str();
  cmd->add_option("--scanpath-length", f.spec_options.scanpath_length,
                  "Fixations drawn for scanpath:<heatmap>")
      ->capture_default_str();
  cmd->add_option("--mask-sigma", f.spec_options.mask_sigma,
                  "Inverted-Gaussian mask sigma for scanpaths (0 = W_V/8)")
      ->capture_default_str();
  cmd->add_flag("--argmax", f.spec_options.argmax,
                "Take the heatmap maximum instead of sampling");
}

std::string output_extension(const std::string& format, int channels) {
  if (format == "png") return ".png";
  if (format == "pnm") return channels == 3 ? ".ppm" : ".pgm";
  return ".rbf";
}

ImageFormat output_format(const std::string& format) {
  if (format == "png") return ImageFormat::kPng;
  if (format == "pnm") return ImageFormat::kPnm;
  return ImageFormat::kRawFloat;
}

struct LoadedDataset {
  std::vector<LabeledImage> items;
  std::vector<std::string> ids;
};

LoadedDataset load_dataset(const fs::path& manifest_path) {
  LoadedDataset data;
  for (const ManifestEntry& e : read_manifest(manifest_path)) {
    try {
      data.items.push_back({read_image(e.path), e.label});
    } catch (const DataError& err) {
      throw DataError(manifest_path.string() + ":" + std::to_string(e.line) +
                      ": " + err.what());
    }
    data.ids.push_back(e.path.filename().string());
  }
  return data;
}

// ---- apply ---------------------------------------------------------------

struct ApplyArgs {
  PipelineOptions pipeline;
  FixationCliOptions fixation;
  std::vector<std::string> inputs;
  std::string out_dir;
  std::string format = "png";
  int jobs = 1;
};

int run_apply(const ApplyArgs& a, std::ostream& out, std::ostream& err) {
  const RBlurConfig config = a.pipeline.resolve();
  const Foveator foveator(config);
  FixationSpecOptions spec_options = a.fixation.spec_options;
  spec_options.seed = config.seed;
  const Scanpath fixations =
      resolve_fixations(a.fixation.spec, foveator.field(), spec_options);
  fs::create_directories(a.out_dir);

  const int count = static_cast<int>(a.inputs.size());
  std::vector<std::vector<std::string>> written(count);
  std::vector<std::string> failures(count);
  parallel_for(count, a.jobs, [&](int i) {
    const fs::path input = a.inputs[i];
    try {
      const Image img = read_image(input);
      img.check_finite();
      // Noise is drawn once per image and shared by all its fixations.
      Rng rng = derive_stream(config.seed, static_cast<std::uint64_t>(i),
                              kImageNoiseDomain);
      const Image noisy = add_gaussian_noise(img, config.noise_scale, rng);
      for (const FixationPoint& f : fixations) {
        const Image result = foveator.foveate(noisy, f);
        const fs::path path =
            fs::path(a.out_dir) /
            (input.stem().string() + "_x" + std::to_string(f.x) + "_y" +
             std::to_string(f.y) + output_extension(a.format, result.channels()));
        write_image(path, result, output_format(a.format));
        std::ostringstream sidecar;
        sidecar << "input=" << input.string() << "\n"
                << "fixation=" << f.x << "," << f.y << "\n"
                << format_config(config);
        const std::string text = sidecar.str();
        fs::path sidecar_path = path;
        sidecar_path += ".txt";
        write_file(sidecar_path,
                   std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                             text.size()));
        written[i].push_back(path.string());
      }
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });

  int failed = 0;
  for (int i = 0; i < count; ++i) {
    for (const std::string& p : written[i]) out << p << "\n";
    if (!failures[i].empty()) {
      ++failed;
      err << "rblur apply: " << a.inputs[i] << ": " << failures[i] << "\n";
    }
  }
  return failed == 0 ? kExitOk : kExitData;
}

// ---- acuity-map ----------------------------------------------------------

struct AcuityMapArgs {
  PipelineOptions pipeline;
  std::string out_path;
  std::string image_path;
  std::string channel = "color";
};

int run_acuity_map(const AcuityMapArgs& a, std::ostream& out) {
  const RBlurConfig config = a.pipeline.resolve();
  const VisualField field(config.field_width);
  const AcuityTable base = build_acuity_table(field, config.acuity,
                                              config.bin_count,
                                              config.merge_threshold);
  const AcuityTable table = apply_viewing_distance(base, config.viewing_distance);

  std::ostringstream dump;
  dump << "# base_max_sigma_color=" << format_report_number(base.color().max_sigma())
       << " base_max_sigma_gray=" << format_report_number(base.gray().max_sigma())
       << " max_sigma_color=" << format_report_number(table.color().max_sigma())
       << " max_sigma_gray=" << format_report_number(table.gray().max_sigma())
       << " in_focus_width=" << table.in_focus_width() << "\n";
  write_table_dump(dump, table);
  if (a.out_path.empty()) {
    out << dump.str();
  } else {
    const std::string text = dump.str();
    write_file(a.out_path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                     text.size()));
  }

  if (!a.image_path.empty()) {
    const Channel channel = a.channel == "gray" ? Channel::kGray : Channel::kColor;
    const int w = config.field_width;
    const EccentricityMap emap = eccentricity_map({w / 2, w / 2}, field);
    const double scale = config.acuity.beta * w;
    Image shade(1, w, w);
    for (int y = 0; y < w; ++y) {
      for (int x = 0; x < w; ++x) {
        const double s = table.sigma(channel, emap.distance(y, x));
        shade.at(0, y, x) = scale > 0.0 ? static_cast<float>(s / scale) : 0.0f;
      }
    }
    write_image(a.image_path, shade);
  }
  return kExitOk;
}

// ---- scanpath ------------------------------------------------------------

struct ScanpathArgs {
  std::string heatmap;
  int count = 5;
  std::uint64_t seed = 0;
  double mask_sigma = 0.0;
  bool argmax = false;
};

int run_scanpath(const ScanpathArgs& a, std::ostream& out) {
  const Heatmap heatmap = read_heatmap(a.heatmap);
  const double mask = a.mask_sigma > 0.0 ? a.mask_sigma
                                         : default_mask_sigma(heatmap.width());
  Rng rng = derive_stream(a.seed, 0, 3);
  const Scanpath path = sample_scanpath(
      heatmap, a.count, mask, rng,
      a.argmax ? SamplingMode::kArgmax : SamplingMode::kMultinomial);
  for (const FixationPoint& p : path) out << p.x << " " << p.y << "\n";
  return kExitOk;
}

// ---- certify -------------------------------------------------------------

struct CertifyArgs {
  PipelineOptions pipeline;
  FixationCliOptions fixation;
  std::string manifest;
  std::string classifier;
  bool wrap = false;
  CertifyParams params;
  std::vector<double> radii{0.0, 0.25, 0.5, 0.75, 1.0};
  std::string out_path;
  bool matched_unmatched = false;
};

std::shared_ptr<const Classifier> build_classifier(
    const std::string& spec, bool wrap, const PipelineOptions& pipeline,
    const FixationCliOptions& fixation) {
  std::shared_ptr<const Classifier> base = load_classifier(spec);
  if (!wrap) return base;
  const RBlurConfig config = pipeline.resolve();
  FixationSpecOptions spec_options = fixation.spec_options;
  spec_options.seed = config.seed;
  Scanpath fixations =
      resolve_fixations(fixation.spec, VisualField(config.field_width), spec_options);
  return std::make_shared<RBlurWrappedClassifier>(base, config, std::move(fixations));
}

void write_certify_records(std::ostream& report, const LoadedDataset& data,
                           const std::vector<CertificationResult>& results) {
  report << "id\tlabel\tprediction\tradius\tp_lower\tcount\tn0\tn\tcorrect\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const CertificationResult& r = results[i];
    const bool correct = !r.abstained && r.predicted_class == data.items[i].label;
    report << data.ids[i] << "\t" << data.items[i].label << "\t"
           << (r.abstained ? std::string("abstain") : std::to_string(r.predicted_class))
           << "\t" << format_report_number(r.radius) << "\t"
           << format_report_number(r.p_lower) << "\t" << r.candidate_count << "\t"
           << r.n0 << "\t" << r.n << "\t" << (correct ? 1 : 0) << "\n";
  }
}

int run_certify(const CertifyArgs& a, std::ostream& out) {
  a.params.validate();
  const auto clf = build_classifier(a.classifier, a.wrap, a.pipeline, a.fixation);
  const LoadedDataset data = load_dataset(a.manifest);
  const std::uint64_t seed = a.pipeline.config.seed;

  std::ostringstream report;
  report << "# classifier=" << a.classifier << " wrapped=" << (a.wrap ? 1 : 0)
         << " sigma=" << format_report_number(a.params.sigma)
         << " n0=" << a.params.n0 << " n=" << a.params.n
         << " alpha=" << format_report_number(a.params.alpha) << " seed=" << seed
         << "\n";
  if (a.wrap) {
    std::string cfg = format_config(a.pipeline.resolve());
    std::replace(cfg.begin(), cfg.end(), '\n', ' ');
    report << "# fixation=" << a.fixation.spec << " " << cfg << "\n";
  }

  auto summarize = [&](const std::string& label,
                       const std::vector<CertificationResult>& results) {
    for (double r : a.radii) {
      report << "certified_accuracy" << label << "\t" << format_report_number(r)
             << "\t" << format_report_number(certified_accuracy(results, data.items, r))
             << "\n";
    }
  };

  if (a.matched_unmatched) {
    CertifyParams p = a.params;
    const auto matched = certify_dataset(*clf, data.items, p, seed);
    p.sigma = 2.0 * a.params.sigma;
    const auto unmatched = certify_dataset(*clf, data.items, p, seed);
    report << "# matched sigma=" << format_report_number(a.params.sigma) << "\n";
    write_certify_records(report, data, matched);
    report << "# unmatched sigma=" << format_report_number(p.sigma) << "\n";
    write_certify_records(report, data, unmatched);
    summarize("_matched", matched);
    summarize("_unmatched", unmatched);
  } else {
    const auto results = certify_dataset(*clf, data.items, a.params, seed);
    write_certify_records(report, data, results);
    summarize("", results);
  }

  const std::string text = report.str();
  if (a.out_path.empty()) {
    out << text;
  } else {
    write_file(a.out_path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                     text.size()));
  }
  return kExitOk;
}

// ---- sweep ---------------------------------------------------------------

struct SweepArgs {
  PipelineOptions pipeline;
  FixationCliOptions fixation;
  std::string manifest;
  std::string classifier;
  std::vector<double> noise_scales{0.0, 0.0625, 0.125, 0.25};
  std::vector<double> betas{0.01, 0.05, 0.1};
  std::vector<int> viewing_distances{0, 1, 3, 5};
  std::vector<std::string> fixation_sets{"center", "five"};
  int jobs = 1;
  std::string out_path;
};

int run_sweep(const SweepArgs& a, std::ostream& out) {
  const RBlurConfig base_config = a.pipeline.resolve();
  const auto base = load_classifier(a.classifier);
  const LoadedDataset data = load_dataset(a.manifest);
  const int count = static_cast<int>(data.items.size());

  std::ostringstream table;
  table << "noise_scale\tbeta\tviewing_distance\tfixations\tnum_fixations\t"
           "accuracy\tmean_l2_change\n";
  for (double noise : a.noise_scales) {
    for (double beta : a.betas) {
      for (int k : a.viewing_distances) {
        for (const std::string& spec : a.fixation_sets) {
          RBlurConfig config = base_config;
          config.noise_scale = noise;
          config.acuity.beta = beta;
          config.viewing_distance = k;
          config.validate();
          FixationSpecOptions spec_options = a.fixation.spec_options;
          spec_options.seed = config.seed;
          const Scanpath fixations = resolve_fixations(
              spec, VisualField(config.field_width), spec_options);
          const RBlurWrappedClassifier clf(base, config, fixations);

          std::vector<int> correct(count, 0);
          std::vector<double> change(count, 0.0);
          parallel_for(count, a.jobs, [&](int i) {
            const Image& img = data.items[i].image;
            correct[i] = clf.predict(img) == data.items[i].label;
            Rng rng = derive_stream(config.seed, static_cast<std::uint64_t>(i),
                                    kImageNoiseDomain);
            const Image noisy = add_gaussian_noise(img, noise, rng);
            double sum = 0.0;
            for (const FixationPoint& f : fixations) {
              sum += l2_distance(clf.foveator().foveate(noisy, f), img);
            }
            change[i] = sum / static_cast<double>(fixations.size());
          });
          double acc = 0.0;
          double l2 = 0.0;
          for (int i = 0; i < count; ++i) {
            acc += correct[i];
            l2 += change[i];
          }
          table << format_report_number(noise) << "\t" << format_report_number(beta)
                << "\t" << k << "\t" << spec << "\t" << fixations.size() << "\t"
                << format_report_number(acc / count) << "\t"
                << format_report_number(l2 / count) << "\n";
        }
      }
    }
  }
  const std::string text = table.str();
  if (a.out_path.empty()) {
    out << text;
  } else {
    write_file(a.out_path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                     text.size()));
  }
  return kExitOk;
}

// Splices "--key=value" tokens from a --config file right after the
// subcommand name so explicit flags (which come later) win.
std::vector<std::string> expand_config(const std::vector<std::string>& args,
                                       const CLI::App& app) {
  std::vector<std::string> rest;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a file");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_path.empty()) return rest;

  const auto entries = read_config_file(config_path);
  auto sub_it = std::find_if(rest.begin(), rest.end(), [&](const std::string& s) {
    return app.get_subcommand_no_throw(s) != nullptr;
  });
  if (sub_it == rest.end()) return rest;
  const CLI::App* sub = app.get_subcommand_no_throw(*sub_it);

  std::vector<std::string> injected;
  for (const auto& [key, value] : entries) {
    const std::string flag = "--" + key;
    if (sub->get_option_no_throw(flag) != nullptr) {
      injected.push_back(flag + "=" + value);
      continue;
    }
    bool known_elsewhere = false;
    for (const CLI::App* other : app.get_subcommands({})) {
      known_elsewhere = known_elsewhere || other->get_option_no_throw(flag) != nullptr;
    }
    if (!known_elsewhere) {
      throw CLI::ExtrasError("config file " + config_path + ": unknown key '" +
                                 key + "'",
                             CLI::ExitCodes::ExtrasError);
    }
  }
  rest.insert(sub_it + 1, injected.begin(), injected.end());
  return rest;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Foveated image transform, scanpaths and randomized-smoothing "
               "certification",
               "rblur"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.add_option("--config", "Flat key=value file; command-line flags override it");

  ApplyArgs apply_args;
  CLI::App* apply = app.add_subcommand("apply", "Foveate images at one or more fixations");
  apply->add_option("inputs", apply_args.inputs, "Input images (PNG, PGM/PPM, .rbf)")
      ->required();
  apply->add_option("-o,--out-dir", apply_args.out_dir, "Output directory")->required();
  apply->add_option("--format", apply_args.format, "Output format: png, pnm or rbf")
      ->check(CLI::IsMember({"png", "pnm", "rbf"}))
      ->capture_default_str();
  apply->add_option("-j,--jobs", apply_args.jobs, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_pipeline_options(apply, apply_args.pipeline);
  add_fixation_options(apply, apply_args.fixation);

  AcuityMapArgs acuity_args;
  CLI::App* acuity = app.add_subcommand("acuity-map", "Dump the quantized acuity table");
  acuity->add_option("-o,--out", acuity_args.out_path, "Dump file (default stdout)");
  acuity->add_option("--image", acuity_args.image_path,
                     "Also write a W_V x W_V image shading each bin by its sigma");
  acuity->add_option("--channel", acuity_args.channel, "Channel shaded in --image")
      ->check(CLI::IsMember({"color", "gray"}))
      ->capture_default_str();
  add_pipeline_options(acuity, acuity_args.pipeline);

  ScanpathArgs scan_args;
  CLI::App* scan = app.add_subcommand("scanpath", "Sample a scanpath from a heatmap");
  scan->add_option("heatmap", scan_args.heatmap, "Grayscale heatmap (PGM/PNG/.rbf)")
      ->required();
  scan->add_option("-n,--count", scan_args.count, "Number of fixations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scan->add_option("--seed", scan_args.seed, "RNG seed")->capture_default_str();
  scan->add_option("--mask-sigma", scan_args.mask_sigma,
                   "Inverted-Gaussian mask sigma (0 = heatmap width / 8)")
      ->capture_default_str();
  scan->add_flag("--argmax", scan_args.argmax, "Take the maximum instead of sampling");

  CertifyArgs cert_args;
  CLI::App* cert = app.add_subcommand("certify", "Randomized-smoothing certification");
  cert->add_option("-m,--manifest", cert_args.manifest, "path<TAB>label per line")
      ->required();
  cert->add_option("-c,--classifier", cert_args.classifier,
                   "constant:<label>:<classes> | linear:<file> | centroid:<file>")
      ->required();
  cert->add_flag("--wrap", cert_args.wrap,
                 "Foveate inputs at --fixation before classifying (scores averaged)");
  cert->add_option("--sigma", cert_args.params.sigma, "Certification noise scale")
      ->capture_default_str();
  cert->add_option("--n0", cert_args.params.n0, "Candidate-selection samples")
      ->capture_default_str();
  cert->add_option("-n,--samples", cert_args.params.n, "Estimation samples")
      ->capture_default_str();
  cert->add_option("--alpha", cert_args.params.alpha, "Failure probability")
      ->capture_default_str();
  cert->add_option("--radii", cert_args.radii, "Radii for the certified-accuracy summary")
      ->delimiter(',')
      ->capture_default_str();
  cert->add_option("-j,--jobs", cert_args.params.threads, "Monte Carlo threads")
      ->capture_default_str();
  cert->add_option("-o,--out", cert_args.out_path, "Report file (default stdout)");
  cert->add_flag("--matched-unmatched", cert_args.matched_unmatched,
                 "Certify at --sigma and at twice --sigma");
  add_pipeline_options(cert, cert_args.pipeline);
  add_fixation_options(cert, cert_args.fixation);

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Accuracy of a foveated classifier over a parameter grid");
  sweep->add_option("-m,--manifest", sweep_args.manifest, "path<TAB>label per line")
      ->required();
  sweep->add_option("-c,--classifier", sweep_args.classifier,
                    "constant:<label>:<classes> | linear:<file> | centroid:<file>")
      ->required();
  sweep->add_option("--noise-scales", sweep_args.noise_scales, "Noise scales")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--betas", sweep_args.betas, "Blur coefficients")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--viewing-distances", sweep_args.viewing_distances,
                    "Viewing distances")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--fixation-sets", sweep_args.fixation_sets,
                    "Fixation specs, e.g. center five grid:3")
      ->capture_default_str();
  sweep->add_option("-j,--jobs", sweep_args.jobs, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep->add_option("-o,--out", sweep_args.out_path, "Table file (default stdout)");
  add_pipeline_options(sweep, sweep_args.pipeline);
  add_fixation_options(sweep, sweep_args.fixation);

  try {
    std::vector<std::string> expanded = expand_config(args, app);
    std::reverse(expanded.begin(), expanded.end());
    app.parse(expanded);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const DataError& e) {
    err << "rblur: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (apply->parsed()) return run_apply(apply_args, out, err);
    if (acuity->parsed()) return run_acuity_map(acuity_args, out);
    if (scan->parsed()) return run_scanpath(scan_args, out);
    if (cert->parsed()) return run_certify(cert_args, out);
    if (sweep->parsed()) return run_sweep(sweep_args, out);
  } catch (const ConfigError& e) {
    err << "rblur: configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    err << "rblur: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "rblur: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace rblur
