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

#include "suss/json_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "suss/error.hpp"

namespace suss {
namespace {

void reject_unknown_keys(const Json& j, const std::set<std::string>& allowed,
                         const char* what) {
  if (!j.is_object()) throw_validation(std::string(what) + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw_validation(std::string(what) + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
void read_opt(const Json& j, const char* key, T& out, const char* what) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw_validation(std::string(what) + ": bad value for '" + key + "'");
  }
}

}  // namespace

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json to_json(const FitConfig& c) {
  return Json{{"steps", c.steps},
              {"lr_mu", c.lr_mu},
              {"lr_logdiag", c.lr_logdiag},
              {"lr_offdiag", c.lr_offdiag},
              {"beta1", c.beta1},
              {"beta2", c.beta2},
              {"eps", c.eps},
              {"weight_decay_offdiag", c.weight_decay_offdiag},
              {"freeze_mu", c.freeze_mu},
              {"rank_margin", c.rank_margin},
              {"rank_weight", c.rank_weight}};
}

FitConfig fit_config_from_json(const Json& j) {
  constexpr const char* kWhat = "fit config";
  reject_unknown_keys(j,
                      {"steps", "lr_mu", "lr_logdiag", "lr_offdiag", "beta1", "beta2",
                       "eps", "weight_decay_offdiag", "freeze_mu", "rank_margin",
                       "rank_weight"},
                      kWhat);
  FitConfig c;
  read_opt(j, "steps", c.steps, kWhat);
  read_opt(j, "lr_mu", c.lr_mu, kWhat);
  read_opt(j, "lr_logdiag", c.lr_logdiag, kWhat);
  read_opt(j, "lr_offdiag", c.lr_offdiag, kWhat);
  read_opt(j, "beta1", c.beta1, kWhat);
  read_opt(j, "beta2", c.beta2, kWhat);
  read_opt(j, "eps", c.eps, kWhat);
  read_opt(j, "weight_decay_offdiag", c.weight_decay_offdiag, kWhat);
  read_opt(j, "freeze_mu", c.freeze_mu, kWhat);
  read_opt(j, "rank_margin", c.rank_margin, kWhat);
  read_opt(j, "rank_weight", c.rank_weight, kWhat);
  c.validate();
  return c;
}

Json to_json(const ComponentWeights& w) {
  Json order = Json::array();
  for (Component c : kComponents) order.push_back(component_name(c));
  return Json{{"log_w", w.log_w}, {"component_order", order}};
}

ComponentWeights weights_from_json(const Json& j) {
  reject_unknown_keys(j, {"log_w", "component_order"}, "weights");
  ComponentWeights w;
  std::vector<double> log_w;
  try {
    log_w = j.at("log_w").get<std::vector<double>>();
  } catch (const Json::exception&) {
    throw_validation("weights: 'log_w' must be an array of 4 numbers");
  }
  if (log_w.size() != kNumComponents) {
    throw_validation("weights: 'log_w' must hold exactly 4 values");
  }
  if (j.contains("component_order")) {
    std::vector<std::string> order;
    read_opt(j, "component_order", order, "weights");
    for (int c = 0; c < kNumComponents; ++c) {
      if (order.size() != kNumComponents || order[c] != component_name(kComponents[c])) {
        throw_validation("weights: component_order must be [y_full, y_half, y_quarter, "
                         "cbcr_quarter]");
      }
    }
  }
  for (int c = 0; c < kNumComponents; ++c) {
    if (!std::isfinite(log_w[c])) throw_validation("weights: non-finite log weight");
    w.log_w[c] = log_w[c];
  }
  return w;
}

Json to_json(const AugmentationPlan& plan) {
  Json out = Json::array();
  for (const PlanEntry& e : plan.entries) {
    out.push_back({{"family", family_name(e.family)}, {"levels", e.levels}, {"count", e.count}});
  }
  return out;
}

AugmentationPlan plan_from_json(const Json& j) {
  if (!j.is_array()) throw_validation("augmentation plan: expected an array");
  AugmentationPlan plan;
  for (const Json& e : j) {
    reject_unknown_keys(e, {"family", "levels", "count"}, "augmentation plan entry");
    PlanEntry entry;
    std::string family;
    read_opt(e, "family", family, "augmentation plan entry");
    entry.family = family_from_name(family);
    entry.levels = {0, 1, 2, 3, 4};
    read_opt(e, "levels", entry.levels, "augmentation plan entry");
    read_opt(e, "count", entry.count, "augmentation plan entry");
    for (int l : entry.levels) {
      if (l < 0 || l >= kNumLevels) {
        throw_validation("augmentation plan entry: level " + std::to_string(l) +
                         " outside 0..4");
      }
    }
    if (entry.count < 1) throw_validation("augmentation plan entry: count must be >= 1");
    plan.entries.push_back(std::move(entry));
  }
  return plan;
}

Json to_json(const AugmentationSpec& s) {
  Json j{{"family", family_name(s.family)},
         {"level", s.level},
         {"seed", s.seed},
         {"magnitude", s.magnitude}};
  switch (s.family) {
    case Family::kTranslation: j["direction_rad"] = s.direction; break;
    case Family::kElastic:
      j["alpha"] = s.alpha;
      j["sigma"] = s.sigma;
      break;
    case Family::kPerspective: j["corners"] = s.corners; break;
    default: j["sign"] = s.direction; break;
  }
  if (s.family == Family::kRotation) j["angle_deg"] = s.direction * s.magnitude;
  return j;
}

Json to_json(const FitTrace& t) {
  Json levels = Json::array();
  for (double v : t.final_level_logp) levels.push_back(finite_or_null(v));
  return Json{{"objective", t.objective},
              {"initial_objective", t.initial_objective},
              {"best_objective", t.best_objective},
              {"restarts", t.restarts},
              {"final_level_logp", levels}};
}

Json to_json(const ScoreBreakdown& s) {
  return Json{{"total", s.total},
              {"per_component", s.per_component},
              {"per_component_weighted", s.per_component_weighted}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw_validation("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw_io("cannot write '" + path.string() + "'");
  out << j.dump(2) << "\n";
  if (!out) throw_io("write failed for '" + path.string() + "'");
}

}  // namespace suss
