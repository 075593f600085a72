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

// Shared plumbing for the command-line tool: run configuration, image
// loading with the crop rule, the auto-fit container cache and structured
// error reporting.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "suss/augment.hpp"
#include "suss/error.hpp"
#include "suss/fitting.hpp"
#include "suss/json_io.hpp"
#include "suss/score.hpp"

namespace suss::cli {

namespace fs = std::filesystem;

/// Everything a subcommand needs besides its positional inputs. Values come
/// from the --config JSON, then global flags override them.
struct RunConfig {
  std::uint64_t seed = 0;
  int workers = 1;
  FitConfig fit;
  AugmentationPlan geometric_plan = default_geometric_plan();
  AugmentationPlan color_plan = default_color_plan();
  std::optional<fs::path> weights_path;
  fs::path output_dir = ".";

  void validate() const;
};

/// {"seed", "workers", "fit", "geometric_plan", "color_plan", "weights_path",
///  "output_dir"}; unknown keys are rejected.
RunConfig run_config_from_json(const Json& j);
Json to_json(const RunConfig& cfg);

/// Exit code for an error kind: 2 io, 3 shape/validation, 4 numeric.
int exit_code(ErrorKind kind);

/// Prints {"error": {"kind", "message"}} to stderr.
void report_error(ErrorKind kind, const std::string& message);
/// Prints {"warning": message} to stderr.
void report_warning(const std::string& message);

/// Loads an image and center-crops it to multiples of 4 (warning on stderr)
/// before checking the decomposition size rules.
ImageRgb load_input_image(const fs::path& path);

std::uint64_t fnv1a(const void* data, std::size_t size,
                    std::uint64_t hash = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a_file(const fs::path& path);
std::string hex64(std::uint64_t v);

/// Writes the four containers as <dir>/<component>.supn.
void save_component_params(const ComponentParams& params, const fs::path& dir);
ComponentParams load_component_params(const fs::path& dir);

/// Fit containers for an image, reusing the cache when present. The cache
/// lives in SUSS_CACHE_DIR, or .suss_cache beside the image, keyed by the
/// image bytes, the fit configuration, both plans and the seed.
ComponentParams fit_or_load_cached(const fs::path& image_path, const ImageRgb& image,
                                   const RunConfig& cfg);

/// A directory of containers, or an image that is fitted (with caching).
ComponentParams resolve_params(const fs::path& source, const RunConfig& cfg);

ComponentWeights resolve_weights(const RunConfig& cfg);

/// Triplet features CSV: y1_<component> x4, y0_<component> x4, h.
std::vector<TripletFeatures> load_triplet_features(const fs::path& path);

void write_text_file(const std::string& text, const fs::path& path);

}  // namespace suss::cli
