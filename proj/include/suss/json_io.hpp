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

// JSON forms of configs, weights, plans and traces. Readers reject unknown
// keys and out-of-range values with kValidation errors.

#pragma once

#include <filesystem>

#include <json.hpp>

#include "suss/augment.hpp"
#include "suss/fitting.hpp"
#include "suss/score.hpp"

namespace suss {

using Json = nlohmann::json;

Json to_json(const FitConfig& cfg);
FitConfig fit_config_from_json(const Json& j);

Json to_json(const ComponentWeights& w);
/// {"log_w": [4 floats], "component_order": [...]}; the order must match.
ComponentWeights weights_from_json(const Json& j);

Json to_json(const AugmentationPlan& plan);
/// [{"family": name, "levels": [ints], "count": n}, ...]
AugmentationPlan plan_from_json(const Json& j);

Json to_json(const AugmentationSpec& spec);
Json to_json(const FitTrace& trace);
Json to_json(const ScoreBreakdown& s);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const Json& j, const std::filesystem::path& path);

/// Serializes a double, mapping non-finite values to null.
Json finite_or_null(double v);

}  // namespace suss
