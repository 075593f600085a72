// Copyright 2026 The SUSS Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli_support.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include <unistd.h>

#include "suss/error.hpp"
#include "suss/image_io.hpp"
#include "suss/supn_io.hpp"

namespace suss::cli {

void RunConfig::validate() const {
  if (workers < 1) throw_validation("workers must be >= 1");
  fit.validate();
  if (geometric_plan.entries.empty() || color_plan.entries.empty()) {
    throw_validation("augmentation plans must not be empty");
  }
}

RunConfig run_config_from_json(const Json& j) {
  if (!j.is_object()) throw_validation("config: expected a JSON object");
  static const std::set<std::string> kAllowed = {"seed",       "workers",      "fit",
                                                 "geometric_plan", "color_plan",
                                                 "weights_path", "output_dir"};
  for (const auto& [key, value] : j.items()) {
    if (!kAllowed.count(key)) throw_validation("config: unknown key '" + key + "'");
  }
  RunConfig cfg;
  try {
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
    if (j.contains("weights_path")) cfg.weights_path = j.at("weights_path").get<std::string>();
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  } catch (const Json::exception& e) {
    throw_validation(std::string("config: ") + e.what());
  }
  if (j.contains("fit")) cfg.fit = fit_config_from_json(j.at("fit"));
  if (j.contains("geometric_plan")) cfg.geometric_plan = plan_from_json(j.at("geometric_plan"));
  if (j.contains("color_plan")) cfg.color_plan = plan_from_json(j.at("color_plan"));
  cfg.validate();
  return cfg;
}

Json to_json(const RunConfig& cfg) {
  Json j{{"seed", cfg.seed},
         {"workers", cfg.workers},
         {"fit", to_json(cfg.fit)},
         {"geometric_plan", to_json(cfg.geometric_plan)},
         {"color_plan", to_json(cfg.color_plan)},
         {"output_dir", cfg.output_dir.string()}};
  if (cfg.weights_path) j["weights_path"] = cfg.weights_path->string();
  return j;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return 2;
    case ErrorKind::kShape:
    case ErrorKind::kValidation: return 3;
    case ErrorKind::kNumeric: return 4;
  }
  return 1;
}

void report_error(ErrorKind kind, const std::string& message) {
  std::cerr << Json{{"error", {{"kind", error_kind_name(kind)}, {"message", message}}}}.dump()
            << std::endl;
}

void report_warning(const std::string& message) {
  std::cerr << Json{{"warning", message}}.dump() << std::endl;
}

ImageRgb load_input_image(const fs::path& path) {
  ImageRgb img = load_image(path);
  if (img.width % 4 != 0 || img.height % 4 != 0) {
    const ImageRgb cropped = center_crop_to_multiple(img, 4);
    report_warning(path.string() + ": center-cropped " + std::to_string(img.width) + "x" +
                   std::to_string(img.height) + " to " + std::to_string(cropped.width) + "x" +
                   std::to_string(cropped.height) + " (dimensions must be multiples of 4)");
    img = cropped;
  }
  check_decomposable(img.width, img.height);
  return img;
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t hash) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t fnv1a_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open '" + path.string() + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return fnv1a(bytes.data(), bytes.size());
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

void save_component_params(const ComponentParams& params, const fs::path& dir) {
  fs::create_directories(dir);
  for (Component c : kComponents) {
    save_supn(params[static_cast<int>(c)], dir / (std::string(component_name(c)) + ".supn"));
  }
}

ComponentParams load_component_params(const fs::path& dir) {
  ComponentParams params;
  for (Component c : kComponents) {
    const int i = static_cast<int>(c);
    params[i] = load_supn(dir / (std::string(component_name(c)) + ".supn"));
    const NeighborhoodLayout expected = component_layout(c);
    if (params[i].layout.window != expected.window ||
        params[i].layout.channels != expected.channels) {
      throw_validation(std::string("container for ") + component_name(c) +
                       " has an unexpected layout");
    }
  }
  return params;
}

ComponentParams fit_or_load_cached(const fs::path& image_path, const ImageRgb& image,
                                   const RunConfig& cfg) {
  Json key = {{"fit", to_json(cfg.fit)},
              {"geometric_plan", to_json(cfg.geometric_plan)},
              {"color_plan", to_json(cfg.color_plan)},
              {"seed", cfg.seed}};
  const std::string key_text = key.dump();
  const std::uint64_t h = fnv1a(key_text.data(), key_text.size(), fnv1a_file(image_path));

  fs::path root;
  if (const char* env = std::getenv("SUSS_CACHE_DIR"); env != nullptr && *env != '\0') {
    root = env;
  } else {
    root = image_path.parent_path() / ".suss_cache";
  }
  const fs::path dir = root / hex64(h);
  if (fs::exists(dir / "cbcr_quarter.supn")) return load_component_params(dir);

  const DecompositionFit fit =
      fit_decomposition(image, cfg.geometric_plan, cfg.color_plan, cfg.fit, cfg.seed);
  // Write to a scratch directory first so a concurrent reader never sees a
  // partial set.
  const fs::path scratch = root / (hex64(h) + ".tmp" + std::to_string(::getpid()));
  save_component_params(fit.params, scratch);
  std::error_code ec;
  fs::rename(scratch, dir, ec);
  if (ec) fs::remove_all(scratch);
  return fit.params;
}

ComponentParams resolve_params(const fs::path& source, const RunConfig& cfg) {
  if (fs::is_directory(source)) return load_component_params(source);
  return fit_or_load_cached(source, load_input_image(source), cfg);
}

ComponentWeights resolve_weights(const RunConfig& cfg) {
  if (!cfg.weights_path) return ComponentWeights{};
  return weights_from_json(read_json_file(*cfg.weights_path));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& text, int row, const std::string& column) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw_validation("row " + std::to_string(row) + ": cannot parse " + column + " value '" +
                     text + "'");
  }
  return v;
}

}  // namespace

std::vector<TripletFeatures> load_triplet_features(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open features file '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw_validation("features file '" + path.string() + "' is empty");
  const std::vector<std::string> header = split_csv_line(line);
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column[header[i]] = i;
  std::vector<std::string> needed;
  for (const char* prefix : {"y1_", "y0_"}) {
    for (Component c : kComponents) needed.push_back(prefix + std::string(component_name(c)));
  }
  needed.push_back("h");
  for (const std::string& name : needed) {
    if (!column.count(name)) throw_validation("features file: missing column '" + name + "'");
  }

  std::vector<TripletFeatures> out;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++row;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != header.size()) {
      throw_validation("row " + std::to_string(row) + ": expected " +
                       std::to_string(header.size()) + " fields");
    }
    TripletFeatures t;
    for (int c = 0; c < kNumComponents; ++c) {
      t.logp_y1[c] = parse_number(f[column[needed[c]]], row, needed[c]);
      t.logp_y0[c] = parse_number(f[column[needed[c + 4]]], row, needed[c + 4]);
    }
    t.h = parse_number(f[column["h"]], row, "h");
    if (t.h < 0.0 || t.h > 1.0) {
      throw_validation("row " + std::to_string(row) + ": h = " + f[column["h"]] +
                       " outside [0,1]");
    }
    out.push_back(t);
  }
  if (out.empty()) throw_validation("features file '" + path.string() + "' has no rows");
  return out;
}

void write_text_file(const std::string& text, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_io("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw_io("write failed for '" + path.string() + "'");
}

}  // namespace suss::cli
