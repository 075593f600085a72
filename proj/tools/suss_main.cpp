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

// suss: command-line front end. Results go to stdout as JSON, diagnostics to
// stderr as JSON. Exit codes: 0 ok, 2 io, 3 shape/validation, 4 numeric.

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_support.hpp"
#include "suss/error.hpp"
#include "suss/evalharness.hpp"
#include "suss/image_io.hpp"
#include "suss/stats.hpp"
#include "suss/supn_io.hpp"

namespace suss::cli {
namespace {

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> output_dir;
};

RunConfig build_run_config(const GlobalOptions& g, const std::string& weights) {
  RunConfig cfg;
  if (!g.config_path.empty()) cfg = run_config_from_json(read_json_file(g.config_path));
  if (g.seed) cfg.seed = *g.seed;
  if (g.workers) cfg.workers = *g.workers;
  if (g.output_dir) cfg.output_dir = *g.output_dir;
  if (!weights.empty()) cfg.weights_path = weights;
  cfg.validate();
  omp_set_num_threads(cfg.workers);
  return cfg;
}

void print(const Json& j) { std::cout << j.dump(2) << std::endl; }

Json to_json(const std::array<double, kNumComponents>& v) {
  Json out = Json::object();
  for (Component c : kComponents) out[component_name(c)] = finite_or_null(v[static_cast<int>(c)]);
  return out;
}

Json score_json(const ScoreBreakdown& b) {
  return Json{{"total", finite_or_null(b.total)},
              {"per_component", to_json(b.per_component)},
              {"per_component_weighted", to_json(b.per_component_weighted)}};
}

// Deterministic fit inputs for artifacts (the output location is excluded).
Json fit_inputs_json(const RunConfig& cfg) {
  return Json{{"seed", cfg.seed},
              {"fit", suss::to_json(cfg.fit)},
              {"geometric_plan", suss::to_json(cfg.geometric_plan)},
              {"color_plan", suss::to_json(cfg.color_plan)}};
}

// ---- fit -------------------------------------------------------------------

int cmd_fit(const RunConfig& cfg, const fs::path& image_path) {
  const ImageRgb img = load_input_image(image_path);
  const DecompositionFit fit =
      fit_decomposition(img, cfg.geometric_plan, cfg.color_plan, cfg.fit, cfg.seed);
  save_component_params(fit.params, cfg.output_dir);

  Json traces = Json::object();
  Json containers = Json::array();
  Json best = Json::object();
  for (Component c : kComponents) {
    const int i = static_cast<int>(c);
    traces[component_name(c)] = suss::to_json(fit.traces[i]);
    containers.push_back((cfg.output_dir / (std::string(component_name(c)) + ".supn")).string());
    best[component_name(c)] = finite_or_null(fit.traces[i].best_objective);
  }
  const fs::path trace_path = cfg.output_dir / "fit_trace.json";
  write_json_file(Json{{"inputs", fit_inputs_json(cfg)}, {"components", traces}}, trace_path);
  print(Json{{"image", image_path.string()},
             {"width", img.width},
             {"height", img.height},
             {"containers", containers},
             {"trace", trace_path.string()},
             {"best_objective", best}});
  return 0;
}

// ---- score / map -----------------------------------------------------------

struct MapFiles {
  fs::path png;
  fs::path sidecar;
};

Json write_map(const Plane& map, const fs::path& png_path) {
  double peak = 0.0, energy = 0.0;
  for (double v : map.data) {
    peak = std::max(peak, v);
    energy += v * v;
  }
  Plane normalized = map;
  if (peak > 0.0) {
    for (double& v : normalized.data) v /= peak;
  }
  if (png_path.has_parent_path()) fs::create_directories(png_path.parent_path());
  save_gray_png(normalized, png_path);
  fs::path sidecar = png_path;
  sidecar.replace_extension(".f32");
  std::string raw(map.data.size() * sizeof(float), '\0');
  for (std::size_t k = 0; k < map.data.size(); ++k) {
    const float f = static_cast<float>(map.data[k]);
    std::memcpy(raw.data() + k * sizeof(float), &f, sizeof(float));
  }
  write_text_file(raw, sidecar);
  return Json{{"png", png_path.string()},
              {"raw_float32", sidecar.string()},
              {"width", map.width},
              {"height", map.height},
              {"max", peak},
              {"energy", energy}};
}

struct ScoreOptions {
  std::string reference;
  std::string candidate;
  bool symmetric = false;
  std::string candidate_params;
  std::string reference_image;
  std::string map_path;
};

int cmd_score(const RunConfig& cfg, const ScoreOptions& o) {
  const ComponentParams params = resolve_params(o.reference, cfg);
  const ComponentWeights weights = resolve_weights(cfg);
  const ImageRgb candidate = load_input_image(o.candidate);
  const ScoreBreakdown b = suss(params, candidate, weights);

  Json out = score_json(b);
  out["max_total"] = finite_or_null(suss_max(params, weights));
  out["weights"] = suss::to_json(weights);
  if (o.symmetric) {
    fs::path ref_image = o.reference_image;
    if (ref_image.empty()) {
      if (fs::is_directory(o.reference)) {
        throw_validation("--symmetric with a container directory needs --reference-image");
      }
      ref_image = o.reference;
    }
    const ImageRgb reference = load_input_image(ref_image);
    const ComponentParams cand_params = o.candidate_params.empty()
                                            ? resolve_params(o.candidate, cfg)
                                            : load_component_params(o.candidate_params);
    const double reverse = suss(cand_params, reference, weights).total;
    out["reverse_total"] = finite_or_null(reverse);
    out["symmetric_total"] =
        finite_or_null(suss_symmetric(params, cand_params, reference, candidate, weights));
  }
  if (!o.map_path.empty()) out["map"] = write_map(suss_map(params, candidate, weights), o.map_path);
  print(out);
  return 0;
}

int cmd_map(const RunConfig& cfg, const std::string& reference, const std::string& candidate,
            std::string out_path) {
  const ComponentParams params = resolve_params(reference, cfg);
  const ComponentWeights weights = resolve_weights(cfg);
  const ImageRgb img = load_input_image(candidate);
  if (out_path.empty()) out_path = (cfg.output_dir / "suss_map.png").string();
  print(write_map(suss_map(params, img, weights), out_path));
  return 0;
}

// ---- sample ----------------------------------------------------------------

void save_component_image(const Plane& plane, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  if (plane.channels == 1) {
    save_gray_png(plane, path);
  } else {
    // Chroma rendered at mid luminance.
    save_image(ycbcr_to_rgb(Plane(plane.width, plane.height, 1, 0.5), plane), path);
  }
}

int cmd_sample(const RunConfig& cfg, const std::string& source, const std::string& component,
               int count, bool ranked) {
  const Component comp = component_from_name(component);
  const ComponentParams all = resolve_params(source, cfg);
  const SupnParams& params = all[static_cast<int>(comp)];
  if (count < 1) throw_validation("--count must be >= 1");
  Json out{{"component", component}, {"count", count}, {"seed", cfg.seed}};
  const std::string prefix = "sample_" + component;
  if (ranked) {
    const RankedSamples r = sample_ranked(params, count, cfg.seed);
    const std::array<std::pair<const char*, const Plane*>, 3> items = {
        std::pair{"min", &r.lowest}, {"median", &r.median}, {"max", &r.highest}};
    Json images = Json::object();
    for (const auto& [name, plane] : items) {
      const fs::path path = cfg.output_dir / (prefix + "_" + name + ".png");
      save_component_image(*plane, path);
      images[name] = path.string();
    }
    out["images"] = images;
    out["log_probs"] = Json{{"min", r.log_prob_lowest},
                            {"median", r.log_prob_median},
                            {"max", r.log_prob_highest}};
  } else {
    Json images = Json::array(), lps = Json::array();
    for (int k = 0; k < count; ++k) {
      const Plane x = sample(params, derive_seed(cfg.seed, k));
      char name[32];
      std::snprintf(name, sizeof(name), "_%04d.png", k);
      const fs::path path = cfg.output_dir / (prefix + name);
      save_component_image(x, path);
      images.push_back(path.string());
      lps.push_back(log_prob(params, x));
    }
    out["images"] = images;
    out["log_probs"] = lps;
  }
  write_json_file(out, cfg.output_dir / (prefix + ".json"));
  print(out);
  return 0;
}

// ---- augment ---------------------------------------------------------------

int cmd_augment(const RunConfig& cfg, const fs::path& image_path, const std::string& family,
                std::optional<int> level, int count, const std::string& plan_path) {
  const ImageRgb img = load_input_image(image_path);
  AugmentationPlan plan;
  if (!family.empty()) {
    if (!plan_path.empty()) throw_validation("use either --family/--level or --plan");
    if (!level) throw_validation("--family needs --level");
    if (count < 1) throw_validation("--count must be >= 1");
    plan.entries.push_back({family_from_name(family), {*level}, count});
  } else if (!plan_path.empty()) {
    plan = plan_from_json(read_json_file(plan_path));
  } else {
    plan = cfg.geometric_plan;
    plan.entries.insert(plan.entries.end(), cfg.color_plan.entries.begin(),
                        cfg.color_plan.entries.end());
  }
  const std::vector<AugmentedImage> batch = generate_batch(img, plan, cfg.seed);

  const std::string stem = image_path.stem().string();
  std::map<std::string, int> seen;
  Json outputs = Json::array();
  for (const AugmentedImage& a : batch) {
    const std::string base =
        stem + "_" + family_name(a.spec.family) + "_" + std::to_string(a.spec.level);
    const int k = seen[base]++;
    const fs::path path =
        cfg.output_dir / (k == 0 ? base + ".png" : base + "_" + std::to_string(k) + ".png");
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    save_image(a.image, path);
    outputs.push_back(Json{{"path", path.string()}, {"spec", suss::to_json(a.spec)}});
  }
  const Json out{{"image", image_path.string()}, {"seed", cfg.seed}, {"outputs", outputs}};
  write_json_file(out, cfg.output_dir / (stem + "_augment_log.json"));
  print(out);
  return 0;
}

// ---- fit-weights -----------------------------------------------------------

int cmd_fit_weights(const RunConfig& cfg, const fs::path& features_path, int refine_steps,
                    double lr) {
  const std::vector<TripletFeatures> data = load_triplet_features(features_path);
  WeightFitConfig wcfg;
  wcfg.refine_steps = refine_steps;
  wcfg.lr = lr;
  if (refine_steps < 0) throw_validation("--refine-steps must be >= 0");
  const WeightFitResult r = fit_weights(data, wcfg);
  const fs::path weights_path = cfg.output_dir / "weights.json";
  fs::create_directories(cfg.output_dir);
  write_json_file(suss::to_json(r.weights), weights_path);
  Json linear = Json::object();
  const auto lin = r.weights.linear();
  for (Component c : kComponents) linear[component_name(c)] = lin[static_cast<int>(c)];
  print(Json{{"triplets", data.size()},
             {"grid_bce", r.grid_bce},
             {"refined_bce", r.refined_bce},
             {"ln2", std::numbers::ln2},
             {"grid_weights", suss::to_json(r.grid_weights)},
             {"weights", suss::to_json(r.weights)},
             {"linear_weights", linear},
             {"weights_path", weights_path.string()}});
  return 0;
}

// ---- eval ------------------------------------------------------------------

struct EvalOptions {
  std::string manifest;
  std::string mode = "2afc";
  bool lenient = false;
  std::vector<std::string> metrics = {"suss", "psnr", "ssim"};
  std::vector<std::string> distance_metrics;
  bool mos_lower_better = false;
};

class MetricBank {
 public:
  MetricBank(const RunConfig& cfg, const std::vector<fs::path>& references,
             bool need_suss)
      : cfg_(cfg), weights_(resolve_weights(cfg)) {
    std::vector<fs::path> unique(references.begin(), references.end());
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    for (const fs::path& p : unique) images_[p] = load_input_image(p);
    if (!need_suss) return;
    std::vector<ComponentParams> fitted(unique.size());
    std::vector<std::string> errors(unique.size());
    std::vector<ErrorKind> kinds(unique.size(), ErrorKind::kIo);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(unique.size()); ++i) {
      try {
        fitted[i] = fit_or_load_cached(unique[i], images_.at(unique[i]), cfg_);
      } catch (const Error& e) {
        errors[i] = e.what();
        kinds[i] = e.kind();
      }
    }
    for (std::size_t i = 0; i < unique.size(); ++i) {
      if (!errors[i].empty()) throw Error(kinds[i], errors[i]);
      params_[unique[i]] = std::move(fitted[i]);
    }
  }

  const ImageRgb& image(const fs::path& p) {
    auto it = images_.find(p);
    if (it == images_.end()) it = images_.emplace(p, load_input_image(p)).first;
    return it->second;
  }

  double similarity(const std::string& metric, const fs::path& ref, const fs::path& cand) {
    const ImageRgb& r = image(ref);
    const ImageRgb& c = image(cand);
    if (metric == "suss") return suss(params_.at(ref), c, weights_).total;
    if (metric == "psnr") return psnr(r, c);
    if (metric == "ssim") return ssim(r, c);
    throw_validation("unknown metric '" + metric + "'");
  }

 private:
  const RunConfig& cfg_;
  ComponentWeights weights_;
  std::map<fs::path, ImageRgb> images_;
  std::map<fs::path, ComponentParams> params_;
};

void check_metrics(const EvalOptions& o) {
  static const std::set<std::string> kKnown = {"suss", "psnr", "ssim"};
  if (o.metrics.empty()) throw_validation("--metrics must name at least one metric");
  for (const std::string& m : o.metrics) {
    if (!kKnown.count(m)) throw_validation("unknown metric '" + m + "'");
  }
  for (const std::string& m : o.distance_metrics) {
    if (!kKnown.count(m)) throw_validation("unknown metric '" + m + "'");
  }
}

double orient(const EvalOptions& o, const std::string& metric, double v) {
  const bool distance =
      std::find(o.distance_metrics.begin(), o.distance_metrics.end(), metric) !=
      o.distance_metrics.end();
  return distance ? -v : v;
}

Json orientation_json(const EvalOptions& o) {
  Json j = Json::object();
  for (const std::string& m : o.metrics) {
    j[m] = orient(o, m, 1.0) > 0 ? "higher_is_more_similar" : "lower_is_more_similar";
  }
  j["mos"] = o.mos_lower_better ? "lower_is_better" : "higher_is_better";
  return j;
}

int eval_2afc(const RunConfig& cfg, const EvalOptions& o) {
  const auto manifest = load_triplet_manifest(
      o.manifest, o.lenient ? MissingFilePolicy::kLenient : MissingFilePolicy::kStrict);
  if (manifest.records.empty()) throw_validation("manifest has no usable rows");
  std::vector<fs::path> refs;
  for (const TripletRecord& r : manifest.records) refs.push_back(r.ref_path);
  const bool need_suss = std::count(o.metrics.begin(), o.metrics.end(), "suss") > 0;
  MetricBank bank(cfg, refs, need_suss);

  std::vector<double> h;
  for (const TripletRecord& r : manifest.records) h.push_back(r.h);
  Json metrics = Json::object();
  for (const std::string& m : o.metrics) {
    std::vector<Choice> choices;
    for (const TripletRecord& r : manifest.records) {
      const double s0 = orient(o, m, bank.similarity(m, r.ref_path, r.p0_path));
      const double s1 = orient(o, m, bank.similarity(m, r.ref_path, r.p1_path));
      choices.push_back(choose(s0, s1));
    }
    metrics[m] = Json{{"twoafc_vote_weighted", twoafc_score(choices, h)},
                      {"twoafc_majority", twoafc_majority(choices, h)}};
  }
  print(Json{{"mode", "2afc"},
             {"manifest", o.manifest},
             {"records", manifest.records.size()},
             {"skipped", manifest.skipped},
             {"orientation", orientation_json(o)},
             {"metrics", metrics}});
  return 0;
}

Json correlation_block(const std::vector<double>& scores, const std::vector<double>& mos) {
  for (double v : scores) {
    if (!std::isfinite(v)) {
      return Json{{"plcc", nullptr}, {"srcc", nullptr}, {"krcc", nullptr},
                  {"degenerate", true}, {"degenerate_reason", "non-finite scores"}};
    }
  }
  try {
    return Json{{"plcc", pearson(scores, mos)},
                {"srcc", spearman(scores, mos)},
                {"krcc", kendall(scores, mos)},
                {"degenerate", false}};
  } catch (const Error& e) {
    return Json{{"plcc", nullptr}, {"srcc", nullptr}, {"krcc", nullptr},
                {"degenerate", true}, {"degenerate_reason", e.what()}};
  }
}

Json kl_block(const std::map<std::string, std::vector<double>>& by_category) {
  if (by_category.size() == 1) {
    // A single category is the aggregate.
    return Json{{"per_category", {{by_category.begin()->first, 0.0}}}, {"degenerate", false}};
  }
  for (const auto& [name, values] : by_category) {
    for (double v : values) {
      if (!std::isfinite(v)) {
        return Json{{"per_category", nullptr},
                    {"degenerate", true},
                    {"degenerate_reason", "non-finite scores"}};
      }
    }
  }
  try {
    Json per = Json::object();
    for (const auto& [name, kl] : kl_calibration(by_category)) per[name] = kl;
    return Json{{"per_category", per}, {"degenerate", false}};
  } catch (const Error& e) {
    return Json{{"per_category", nullptr}, {"degenerate", true},
                {"degenerate_reason", e.what()}};
  }
}

Json auc_block(const std::vector<double>& scores, const std::vector<double>& mos) {
  const std::size_t n = scores.size();
  if (n < 2) return Json{{"auc", nullptr}, {"degenerate", true},
                         {"degenerate_reason", "fewer than 2 records"}};
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mos[a] < mos[b]; });
  const std::size_t q = std::max<std::size_t>(1, n / 5);
  std::vector<double> low, high;
  for (std::size_t i = 0; i < q; ++i) {
    low.push_back(scores[order[i]]);
    high.push_back(scores[order[n - 1 - i]]);
  }
  return Json{{"auc", auc_separation(high, low)}, {"group_size", q}, {"degenerate", false}};
}

int eval_mos(const RunConfig& cfg, const EvalOptions& o) {
  const auto manifest = load_mos_manifest(
      o.manifest, o.lenient ? MissingFilePolicy::kLenient : MissingFilePolicy::kStrict);
  if (manifest.records.empty()) throw_validation("manifest has no usable rows");
  std::vector<fs::path> refs;
  std::vector<double> mos;
  for (const MosRecord& r : manifest.records) {
    refs.push_back(r.ref_path);
    mos.push_back(o.mos_lower_better ? -r.mos : r.mos);
  }
  const bool need_suss = std::count(o.metrics.begin(), o.metrics.end(), "suss") > 0;
  MetricBank bank(cfg, refs, need_suss);

  Json metrics = Json::object();
  bool any_degenerate = false;
  for (const std::string& m : o.metrics) {
    std::vector<double> scores;
    std::map<std::string, std::vector<double>> by_category;
    for (const MosRecord& r : manifest.records) {
      const double s = orient(o, m, bank.similarity(m, r.ref_path, r.dist_path));
      scores.push_back(s);
      by_category[r.category].push_back(s);
    }
    Json block = correlation_block(scores, mos);
    const bool degenerate = block["degenerate"].get<bool>();
    any_degenerate = any_degenerate || degenerate;
    block["kl"] = kl_block(by_category);
    const bool finite = std::all_of(scores.begin(), scores.end(),
                                    [](double v) { return std::isfinite(v); });
    block["auc_top_vs_bottom_quintile"] =
        finite ? auc_block(scores, mos)
               : Json{{"auc", nullptr}, {"degenerate", true},
                      {"degenerate_reason", "non-finite scores"}};
    Json raw = Json::array();
    for (double s : scores) raw.push_back(finite_or_null(s));
    block["scores"] = raw;
    metrics[m] = block;
  }
  print(Json{{"mode", "mos"},
             {"manifest", o.manifest},
             {"records", manifest.records.size()},
             {"skipped", manifest.skipped},
             {"orientation", orientation_json(o)},
             {"degenerate", any_degenerate},
             {"metrics", metrics}});
  return 0;
}

int cmd_eval(const RunConfig& cfg, const EvalOptions& o) {
  check_metrics(o);
  if (o.mode == "2afc") return eval_2afc(cfg, o);
  if (o.mode == "mos") return eval_mos(cfg, o);
  throw_validation("--mode must be 2afc or mos");
}

// ---- reconstruct -----------------------------------------------------------

int cmd_reconstruct(const RunConfig& cfg, const std::string& reference,
                    const fs::path& init_path, int steps, double lr, double init_noise) {
  const ComponentParams params = resolve_params(reference, cfg);
  const ComponentWeights weights = resolve_weights(cfg);
  ImageRgb init = load_input_image(init_path);
  if (init_noise < 0.0) throw_validation("--init-noise must be >= 0");
  if (init_noise > 0.0) {
    std::mt19937_64 rng(derive_seed(cfg.seed, 0x4e01));
    std::normal_distribution<double> normal(0.0, init_noise);
    for (double& v : init.data) v = std::clamp(v + normal(rng), 0.0, 1.0);
  }
  const ReconstructResult r = reconstruct(params, init, weights, steps, lr);
  fs::create_directories(cfg.output_dir);
  const fs::path image_path = cfg.output_dir / "reconstruction.png";
  save_image(r.image, image_path);
  const Json out{{"image", image_path.string()},
                 {"steps", steps},
                 {"lr", lr},
                 {"initial_score", r.scores.front()},
                 {"best_score", r.best_score},
                 {"max_total", suss_max(params, weights)},
                 {"scores", r.scores},
                 {"best_so_far", r.best_so_far}};
  write_json_file(out, cfg.output_dir / "reconstruct_trace.json");
  print(out);
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Structured-uncertainty image similarity: fit, score, map, sample, augment, "
               "fit-weights, eval, reconstruct"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--config", g.config_path, "Run configuration JSON")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Random seed (default 0)");
  app.add_option("--workers", g.workers, "Worker threads (default 1)");
  app.add_option("--output-dir", g.output_dir, "Directory for artifacts (default .)");
  std::string weights;

  std::string fit_image;
  auto* fit = app.add_subcommand("fit", "Fit the four component Gaussians for an image");
  fit->add_option("image", fit_image, "Reference image (PNG or PPM)")->required();

  ScoreOptions so;
  auto* score = app.add_subcommand("score", "Score a candidate against a reference");
  score->add_option("reference", so.reference, "Container directory or reference image")
      ->required();
  score->add_option("candidate", so.candidate, "Candidate image")->required();
  score->add_flag("--symmetric", so.symmetric, "Also report the two-direction average");
  score->add_option("--candidate-params", so.candidate_params,
                    "Container directory fitted on the candidate (for --symmetric)");
  score->add_option("--reference-image", so.reference_image,
                    "Reference image when the reference is a container directory");
  score->add_option("--map", so.map_path, "Write the similarity map to this PNG");
  score->add_option("--weights", weights, "Component weights JSON");

  std::string map_ref, map_cand, map_out;
  auto* map = app.add_subcommand("map", "Write the per-pixel similarity map");
  map->add_option("reference", map_ref, "Container directory or reference image")->required();
  map->add_option("candidate", map_cand, "Candidate image")->required();
  map->add_option("--out", map_out, "Output PNG (default <output-dir>/suss_map.png)");
  map->add_option("--weights", weights, "Component weights JSON");

  std::string sample_src, sample_component = "y_full";
  int sample_count = 1;
  bool sample_ranked_flag = false;
  auto* samp = app.add_subcommand("sample", "Draw samples from a fitted component");
  samp->add_option("source", sample_src, "Container directory or reference image")->required();
  samp->add_option("--component", sample_component,
                   "y_full, y_half, y_quarter or cbcr_quarter");
  samp->add_option("--count", sample_count, "Number of samples");
  samp->add_flag("--ranked", sample_ranked_flag,
                 "Keep only the minimum, median and maximum log-probability samples");

  std::string aug_image, aug_family, aug_plan;
  std::optional<int> aug_level;
  int aug_count = 1;
  auto* aug = app.add_subcommand("augment", "Write augmented copies of an image");
  aug->add_option("image", aug_image, "Input image")->required();
  aug->add_option("--family", aug_family, "Augmentation family");
  aug->add_option("--level", aug_level, "Intensity level 0..4");
  aug->add_option("--count", aug_count, "Draws for --family/--level");
  aug->add_option("--plan", aug_plan, "Plan JSON: [{family, levels, count}]");

  std::string fw_path;
  int fw_steps = 2000;
  double fw_lr = 1e-2;
  auto* fw = app.add_subcommand("fit-weights", "Learn component weights from triplet features");
  fw->add_option("features", fw_path, "CSV with y1_<component>, y0_<component>, h")
      ->required();
  fw->add_option("--refine-steps", fw_steps, "Adam refinement steps");
  fw->add_option("--lr", fw_lr, "Adam learning rate");

  EvalOptions eo;
  auto* ev = app.add_subcommand("eval", "Evaluate metrics on a 2AFC or MOS manifest");
  ev->add_option("manifest", eo.manifest, "Manifest CSV")->required();
  ev->add_option("--mode", eo.mode, "2afc or mos");
  ev->add_flag("--lenient", eo.lenient, "Skip rows with missing files instead of failing");
  ev->add_option("--metrics", eo.metrics, "Metrics to evaluate")->delimiter(',');
  ev->add_option("--distance-metrics", eo.distance_metrics,
                 "Metrics whose values are distances (sign flipped)")
      ->delimiter(',');
  ev->add_flag("--mos-lower-better", eo.mos_lower_better, "Lower MOS means higher quality");
  ev->add_option("--weights", weights, "Component weights JSON");

  std::string rec_ref, rec_init;
  int rec_steps = 200;
  double rec_lr = 5e-3, rec_noise = 0.0;
  auto* rec = app.add_subcommand("reconstruct", "Ascend the score from an initial image");
  rec->add_option("reference", rec_ref, "Container directory or reference image")->required();
  rec->add_option("init", rec_init, "Initial image")->required();
  rec->add_option("--steps", rec_steps, "Ascent steps");
  rec->add_option("--lr", rec_lr, "Adam step size");
  rec->add_option("--init-noise", rec_noise, "Gaussian noise added to the initial image");
  rec->add_option("--weights", weights, "Component weights JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error(ErrorKind::kValidation, e.what());
    return 3;
  }

  const RunConfig cfg = build_run_config(g, weights);
  if (fit->parsed()) return cmd_fit(cfg, fit_image);
  if (score->parsed()) return cmd_score(cfg, so);
  if (map->parsed()) return cmd_map(cfg, map_ref, map_cand, map_out);
  if (samp->parsed()) {
    return cmd_sample(cfg, sample_src, sample_component, sample_count, sample_ranked_flag);
  }
  if (aug->parsed()) return cmd_augment(cfg, aug_image, aug_family, aug_level, aug_count, aug_plan);
  if (fw->parsed()) return cmd_fit_weights(cfg, fw_path, fw_steps, fw_lr);
  if (ev->parsed()) return cmd_eval(cfg, eo);
  if (rec->parsed()) return cmd_reconstruct(cfg, rec_ref, rec_init, rec_steps, rec_lr, rec_noise);
  return 0;
}

}  // namespace
}  // namespace suss::cli

int main(int argc, char** argv) {
  using suss::cli::report_error;
  try {
    return suss::cli::run(argc, argv);
  } catch (const suss::Error& e) {
    report_error(e.kind(), e.what());
    return suss::cli::exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    report_error(suss::ErrorKind::kIo, e.what());
    return 2;
  } catch (const std::exception& e) {
    report_error(suss::ErrorKind::kValidation, e.what());
    return 3;
  }
}
