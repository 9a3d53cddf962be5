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

// Text formats used by the command-line tools: key=value config files,
// fixation specs, dataset manifests and toy classifier parameter files.

#ifndef RBLUR_CONFIG_H_
#define RBLUR_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rblur/certify.h"
#include "rblur/fixation.h"
#include "rblur/foveate.h"

namespace rblur {

// Ordered key/value pairs from a flat UTF-8 config file. Blank lines and
// lines starting with '#' are skipped; keys are normalized to lower case
// with '_' replaced by '-'. Throws DataError with the line number.
std::vector<std::pair<std::string, std::string>> parse_config_text(
    const std::string& text);
std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::filesystem::path& path);

// Shortest round-trip decimal form.
std::string format_double(double v);
// printf("%.6g").
std::string format_report_number(double v);

// key=value lines for every pipeline field, in the same key names the CLI
// accepts.
std::string format_config(const RBlurConfig& config);

// Fixation specs:
//   "x,y" (several separated by ';'), "center", "five", "grid:N",
//   "scanpath:<heatmap file>".
struct FixationSpecOptions {
  int scanpath_length = 5;
  double mask_sigma = 0.0;  // 0 means field_width / 8
  bool argmax = false;
  std::uint64_t seed = 0;
};

Scanpath resolve_fixations(const std::string& spec, const VisualField& field,
                           const FixationSpecOptions& options = {});

// One "path<TAB>label" per line; relative paths resolve against the
// manifest's directory. Images are not loaded here.
struct ManifestEntry {
  std::filesystem::path path;
  int label = 0;
  int line = 0;
};
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

// "constant:<label>:<classes>", "linear:<file>" (one row per class: bias
// then weights), "centroid:<file>" (one centroid per row).
std::shared_ptr<const Classifier> load_classifier(const std::string& spec);

}  // namespace rblur

#endif  // RBLUR_CONFIG_H_
