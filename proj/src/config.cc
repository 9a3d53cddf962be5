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

#include "rblur/config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rblur/errors.h"
#include "rblur/image_io.h"
#include "rblur/random.h"

namespace rblur {
namespace {

constexpr std::uint64_t kScanpathDomain = 3;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

int parse_int(const std::string& s, const std::string& what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError("invalid " + what + " '" + s + "'");
  }
  return v;
}

std::vector<std::vector<double>> read_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open classifier file " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::vector<double> row;
    std::string tok;
    while (fields >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw DataError(path.string() + ":" + std::to_string(line_no) +
                        ": not a number '" + tok + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError(path.string() + ": no classifier rows");
  return rows;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_config_text(
    const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw DataError("config line " + std::to_string(line_no) +
                      ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
      return c == '_' ? '-' : static_cast<char>(std::tolower(c));
    });
    entries.emplace_back(std::move(key), trim(line.substr(eq + 1)));
  }
  return entries;
}

std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config_text(buffer.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string format_report_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string format_config(const RBlurConfig& c) {
  std::ostringstream out;
  out << "sigma-color=" << format_double(c.acuity.sigma_color) << "\n"
      << "sigma-rod=" << format_double(c.acuity.sigma_rod) << "\n"
      << "acuity-alpha=" << format_double(c.acuity.alpha) << "\n"
      << "p-max=" << format_double(c.acuity.p_max) << "\n"
      << "beta=" << format_double(c.acuity.beta) << "\n"
      << "envelope=" << to_string(c.acuity.norm) << "\n"
      << "field-width=" << c.field_width << "\n"
      << "noise-scale=" << format_double(c.noise_scale) << "\n"
      << "viewing-distance=" << c.viewing_distance << "\n"
      << "bins=" << c.bin_count << "\n"
      << "merge-threshold=" << c.merge_threshold << "\n"
      << "seed=" << c.seed << "\n";
  return out.str();
}

Scanpath resolve_fixations(const std::string& spec, const VisualField& field,
                           const FixationSpecOptions& options) {
  if (spec == "center") {
    return {{field.width() / 2, field.height() / 2}};
  }
  if (spec == "five") return five_fixations(field);
  if (spec.rfind("grid:", 0) == 0) {
    return fixation_grid(field, parse_int(spec.substr(5), "grid side"));
  }
  if (spec.rfind("scanpath:", 0) == 0) {
    const Heatmap heatmap = read_heatmap(spec.substr(9));
    const double mask = options.mask_sigma > 0.0
                            ? options.mask_sigma
                            : default_mask_sigma(field.width());
    Rng rng = derive_stream(options.seed, 0, kScanpathDomain);
    Scanpath path = sample_scanpath(
        heatmap, options.scanpath_length, mask, rng,
        options.argmax ? SamplingMode::kArgmax : SamplingMode::kMultinomial);
    for (const FixationPoint& p : path) {
      if (!field.contains(p)) throw InputError("heatmap larger than the visual field");
    }
    return path;
  }
  Scanpath points;
  std::istringstream list(spec);
  std::string item;
  while (std::getline(list, item, ';')) {
    const auto comma = item.find(',');
    if (comma == std::string::npos) {
      throw InputError("unrecognized fixation spec '" + spec + "'");
    }
    const FixationPoint p{parse_int(trim(item.substr(0, comma)), "fixation x"),
                          parse_int(trim(item.substr(comma + 1)), "fixation y")};
    if (!field.contains(p)) {
      throw InputError("fixation '" + item + "' outside the visual field");
    }
    points.push_back(p);
  }
  if (points.empty()) throw InputError("empty fixation spec");
  return points;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());
  const std::filesystem::path base = path.parent_path();
  std::vector<ManifestEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    const auto tab = line.find('\t');
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (tab == std::string::npos || tab == 0) {
      throw DataError(where + ": expected path<TAB>label");
    }
    ManifestEntry entry;
    entry.path = line.substr(0, tab);
    if (entry.path.is_relative()) entry.path = base / entry.path;
    try {
      entry.label = parse_int(trim(line.substr(tab + 1)), "label");
    } catch (const InputError& e) {
      throw DataError(where + ": " + e.what());
    }
    if (entry.label < 0) throw DataError(where + ": label must be >= 0");
    entry.line = line_no;
    entries.push_back(std::move(entry));
  }
  if (entries.empty()) throw DataError(path.string() + ": manifest is empty");
  return entries;
}

std::shared_ptr<const Classifier> load_classifier(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "constant") {
    const auto sep = rest.find(':');
    if (sep == std::string::npos) {
      throw InputError("constant classifier spec is constant:<label>:<classes>");
    }
    return std::make_shared<ConstantClassifier>(
        parse_int(rest.substr(0, sep), "label"),
        parse_int(rest.substr(sep + 1), "class count"));
  }
  if (kind == "linear") {
    std::vector<std::vector<double>> rows = read_rows(rest);
    std::vector<double> bias;
    for (auto& row : rows) {
      if (row.size() < 2) throw DataError(rest + ": linear rows need bias and weights");
      bias.push_back(row.front());
      row.erase(row.begin());
    }
    try {
      return std::make_shared<LinearClassifier>(std::move(rows), std::move(bias));
    } catch (const ConfigError& e) {
      throw DataError(rest + ": " + e.what());
    }
  }
  if (kind == "centroid") {
    try {
      return std::make_shared<NearestCentroidClassifier>(read_rows(rest));
    } catch (const ConfigError& e) {
      throw DataError(rest + ": " + e.what());
    }
  }
  throw InputError("unknown classifier '" + spec +
                   "' (expected constant:, linear: or centroid:)");
}

}  // namespace rblur
