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

#include "suss/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "suss/error.hpp"
#include "suss/supn_kernels.hpp"

namespace suss {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Visits the parameter planes in container order with their step size.
template <typename Params, typename Fn>
void for_each_plane(Params& p, const FitConfig& cfg, Fn&& fn) {
  fn(p.mu, cfg.freeze_mu ? 0.0 : cfg.lr_mu);
  fn(p.log_diag, cfg.lr_logdiag);
  for (auto& o : p.off_diag) fn(o, cfg.lr_offdiag);
  if (!p.intra.data.empty()) fn(p.intra, cfg.lr_offdiag);
}

class Adam {
 public:
  Adam(const SupnParams& shape, const FitConfig& cfg) : cfg_(cfg) {
    std::size_t n = 0;
    for_each_plane(shape, cfg, [&](const Plane& p, double) { n += p.size(); });
    m_.assign(n, 0.0);
    v_.assign(n, 0.0);
  }

  void step(SupnParams& params, SupnGradient& grad, double lr_scale) {
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, t_);
    const double c2 = 1.0 - std::pow(cfg_.beta2, t_);
    std::size_t offset = 0;
    std::size_t plane_index = 0;
    std::vector<Plane*> grads;
    for_each_plane(grad, cfg_, [&](Plane& g, double) { grads.push_back(&g); });
    for_each_plane(params, cfg_, [&](Plane& p, double lr) {
      const Plane& g = *grads[plane_index++];
      for (std::size_t k = 0; k < p.size(); ++k, ++offset) {
        const double gk = g.data[k];
        m_[offset] = cfg_.beta1 * m_[offset] + (1.0 - cfg_.beta1) * gk;
        v_[offset] = cfg_.beta2 * v_[offset] + (1.0 - cfg_.beta2) * gk * gk;
        if (lr == 0.0) continue;
        const double update =
            (m_[offset] / c1) / (std::sqrt(v_[offset] / c2) + cfg_.eps);
        p.data[k] = static_cast<double>(static_cast<float>(p.data[k] - lr * lr_scale * update));
      }
    });
  }

 private:
  FitConfig cfg_;
  std::vector<double> m_, v_;
  int t_ = 0;
};

void check_batch(const SupnParams& params, const Batch& batch) {
  for (const BatchItem& item : batch) {
    if (!item.component.same_shape(params.mu)) {
      throw_shape("batch item shape does not match the parameters");
    }
    if (item.level < 0 || item.level >= kNumLevels) {
      throw_validation("batch item level out of range: " + std::to_string(item.level));
    }
  }
}

struct ItemState {
  std::vector<double> r, s;
  double logp = 0.0;
};

std::vector<ItemState> evaluate_items(const SupnParams& params, const Batch& batch) {
  const double max_lp = max_log_prob(params);
  std::vector<ItemState> states(batch.size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    ItemState& st = states[b];
    const Plane& y = batch[b].component;
    st.r.resize(y.size());
    st.s.resize(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) st.r[k] = y.data[k] - params.mu.data[k];
    kernels::parallel::whiten(params, st.r, st.s);
    st.logp = max_lp - 0.5 * kernels::parallel::squared_norm(params, st.s);
  }
  return states;
}

// Per-level means over the levels present in the batch, in level order.
struct LevelMeans {
  std::vector<int> levels;
  std::vector<double> means;
  std::vector<int> counts;
};

LevelMeans level_means(const Batch& batch, const std::vector<ItemState>& states) {
  std::array<double, kNumLevels> sum{};
  std::array<int, kNumLevels> count{};
  for (std::size_t b = 0; b < batch.size(); ++b) {
    sum[batch[b].level] += states[b].logp;
    ++count[batch[b].level];
  }
  LevelMeans out;
  for (int l = 0; l < kNumLevels; ++l) {
    if (count[l] == 0) continue;
    out.levels.push_back(l);
    out.means.push_back(sum[l] / count[l]);
    out.counts.push_back(count[l]);
  }
  return out;
}

double off_diag_sq_norm(const SupnParams& p) {
  double acc = 0.0;
  for (const Plane& o : p.off_diag) {
    for (double v : o.data) acc += v * v;
  }
  for (double v : p.intra.data) acc += v * v;
  return acc;
}

struct Evaluation {
  double objective = 0.0;
  SupnGradient grad;
};

Evaluation evaluate(const SupnParams& params, const Batch& batch, const FitConfig& cfg,
                    bool with_grad) {
  const std::vector<ItemState> states = evaluate_items(params, batch);
  Evaluation ev;
  std::vector<double> coef(batch.size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const double w = level_weight(batch[b].level);
    ev.objective -= w * states[b].logp;
    coef[b] = -w;
  }
  if (cfg.rank_weight > 0.0) {
    const LevelMeans lm = level_means(batch, states);
    ev.objective += cfg.rank_weight * ranking_loss_r(lm.means, cfg.rank_margin);
    const std::vector<double> g = ranking_loss_r_grad(lm.means, cfg.rank_margin);
    for (std::size_t b = 0; b < batch.size(); ++b) {
      const auto it = std::find(lm.levels.begin(), lm.levels.end(), batch[b].level);
      const std::size_t idx = static_cast<std::size_t>(it - lm.levels.begin());
      coef[b] += cfg.rank_weight * g[idx] / lm.counts[idx];
    }
  }
  ev.objective += cfg.weight_decay_offdiag * off_diag_sq_norm(params);
  if (!with_grad) return ev;

  ev.grad = SupnParams::zeros(params.layout, params.width, params.height);
  std::vector<double> ls(params.num_variables());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    kernels::parallel::apply_factor(params, states[b].s, ls);
    kernels::parallel::accumulate_param_grad(params, states[b].r, states[b].s, ls, coef[b],
                                             ev.grad);
  }
  const double wd2 = 2.0 * cfg.weight_decay_offdiag;
  for (std::size_t o = 0; o < params.off_diag.size(); ++o) {
    for (std::size_t k = 0; k < params.off_diag[o].size(); ++k) {
      ev.grad.off_diag[o].data[k] += wd2 * params.off_diag[o].data[k];
    }
  }
  for (std::size_t k = 0; k < params.intra.size(); ++k) {
    ev.grad.intra.data[k] += wd2 * params.intra.data[k];
  }
  return ev;
}

}  // namespace

void FitConfig::validate() const {
  if (steps < 1) throw_validation("fit config: steps must be >= 1");
  if (!(lr_mu > 0.0) || !(lr_logdiag > 0.0) || !(lr_offdiag > 0.0)) {
    throw_validation("fit config: learning rates must be > 0");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(eps > 0.0)) {
    throw_validation("fit config: Adam betas must be in [0,1) and eps > 0");
  }
  if (!(weight_decay_offdiag >= 0.0)) {
    throw_validation("fit config: weight_decay_offdiag must be >= 0");
  }
  if (!(rank_weight >= 0.0)) throw_validation("fit config: rank_weight must be >= 0");
  if (!std::isfinite(rank_margin)) throw_validation("fit config: rank_margin must be finite");
}

double level_weight(int level) { return 1.0 / (level + 1.0); }

SupnParams init_params(const Plane& component, const NeighborhoodLayout& layout,
                       const Batch& probe) {
  if (component.width <= 0 || component.height <= 0 || component.data.empty()) {
    throw_shape("init_params: degenerate (zero-area) component");
  }
  if (component.channels != layout.channels) {
    throw_shape("init_params: component channels do not match the layout");
  }
  SupnParams p = SupnParams::zeros(layout, component.width, component.height);
  p.mu = component;

  double sum = 0.0, sum_sq = 0.0;
  std::size_t n = 0;
  for (const BatchItem& item : probe) {
    if (!item.component.same_shape(component)) {
      throw_shape("init_params: probe item shape does not match the component");
    }
    for (std::size_t k = 0; k < component.size(); ++k) {
      const double r = item.component.data[k] - component.data[k];
      sum += r;
      sum_sq += r * r;
    }
    n += component.size();
  }
  double sigma = 0.0;
  if (n > 0) {
    const double mean = sum / static_cast<double>(n);
    sigma = std::sqrt(std::max(0.0, sum_sq / static_cast<double>(n) - mean * mean));
  }
  std::fill(p.log_diag.data.begin(), p.log_diag.data.end(), -std::log(std::max(sigma, 1e-3)));
  round_to_storage(p);
  return p;
}

double supn_nll(const SupnParams& params, const Batch& batch) {
  check_batch(params, batch);
  double total = 0.0;
  for (const BatchItem& item : batch) {
    total += level_weight(item.level) * -log_prob(params, item.component);
  }
  return total;
}

SupnGradient supn_nll_grad(const SupnParams& params, const Batch& batch) {
  check_batch(params, batch);
  FitConfig plain;
  plain.weight_decay_offdiag = 0.0;
  plain.rank_weight = 0.0;
  return evaluate(params, batch, plain, true).grad;
}

std::array<double, kNumLevels> mean_logp_by_level(const SupnParams& params,
                                                  const Batch& batch) {
  check_batch(params, batch);
  const std::vector<ItemState> states = evaluate_items(params, batch);
  const LevelMeans lm = level_means(batch, states);
  std::array<double, kNumLevels> out;
  out.fill(kNaN);
  for (std::size_t i = 0; i < lm.levels.size(); ++i) out[lm.levels[i]] = lm.means[i];
  return out;
}

double ranking_loss_r(std::span<const double> v, double margin) {
  double loss = 0.0;
  for (std::size_t l = 0; l + 1 < v.size(); ++l) {
    loss += std::max(0.0, margin + v[l + 1] - v[l]);
  }
  return loss;
}

std::vector<double> ranking_loss_r_grad(std::span<const double> v, double margin) {
  std::vector<double> g(v.size(), 0.0);
  for (std::size_t l = 0; l + 1 < v.size(); ++l) {
    if (margin + v[l + 1] - v[l] > 0.0) {
      g[l + 1] += 1.0;
      g[l] -= 1.0;
    }
  }
  return g;
}

namespace {

struct Centered {
  std::vector<double> a, b;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
};

Centered center_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw_shape("ranking_loss_rh: length mismatch");
  if (x.size() < 3) throw_validation("ranking_loss_rh: needs at least 3 pairs");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  Centered c;
  c.a.resize(x.size());
  c.b.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    c.a[i] = x[i] - mx;
    c.b[i] = y[i] - my;
    c.saa += c.a[i] * c.a[i];
    c.sbb += c.b[i] * c.b[i];
    c.sab += c.a[i] * c.b[i];
  }
  if (c.sbb == 0.0) throw_numeric("ranking_loss_rh: human scores have zero variance");
  if (c.saa == 0.0) throw_numeric("ranking_loss_rh: log-probs have zero variance");
  return c;
}

}  // namespace

double ranking_loss_rh(std::span<const double> logps, std::span<const double> human) {
  const Centered c = center_pair(logps, human);
  return 1.0 - c.sab / std::sqrt(c.saa * c.sbb);
}

std::vector<double> ranking_loss_rh_grad(std::span<const double> logps,
                                         std::span<const double> human) {
  const Centered c = center_pair(logps, human);
  const double norm = std::sqrt(c.saa * c.sbb);
  const double rho = c.sab / norm;
  std::vector<double> g(logps.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = -(c.b[i] / norm - rho * c.a[i] / c.saa);
  return g;
}

double fit_objective(const SupnParams& params, const Batch& batch, const FitConfig& config) {
  check_batch(params, batch);
  return evaluate(params, batch, config, false).objective;
}

FitResult fit_supn(const Plane& component, const Batch& batch,
                   const NeighborhoodLayout& layout, const FitConfig& config) {
  config.validate();
  if (batch.empty()) throw_validation("fit_supn: empty batch");
  const SupnParams init = init_params(component, layout, batch);
  check_batch(init, batch);

  FitResult result;
  FitTrace& trace = result.trace;
  SupnParams params = init;
  Adam adam(params, config);
  double lr_scale = 1.0;
  double best = std::numeric_limits<double>::infinity();
  double initial = 0.0;

  for (int step = 0; step < config.steps; ++step) {
    Evaluation ev = evaluate(params, batch, config, true);
    if (!std::isfinite(ev.objective)) {
      throw_numeric("fit_supn: non-finite objective at step " + std::to_string(step) +
                    " (component " + params.component_id + ")");
    }
    if (step == 0) initial = ev.objective;
    trace.objective.push_back(ev.objective);
    if (ev.objective < best) {
      best = ev.objective;
      result.params = params;
    }
    if (trace.restarts == 0 && ev.objective - initial > 10.0 * std::abs(initial)) {
      // Diverging: halve the step sizes and restart from the initial point once.
      trace.restarts = 1;
      lr_scale *= 0.5;
      params = init;
      adam = Adam(params, config);
      continue;
    }
    adam.step(params, ev.grad, lr_scale);
  }
  const double last = evaluate(params, batch, config, false).objective;
  if (std::isfinite(last) && last < best) {
    best = last;
    result.params = params;
  }
  trace.initial_objective = initial;
  trace.best_objective = best;
  trace.final_level_logp = mean_logp_by_level(result.params, batch);
  return result;
}

NeighborhoodLayout component_layout(Component c) {
  switch (c) {
    case Component::kYFull:
    case Component::kYHalf: return offset_set(8, 1);
    case Component::kYQuarter: return offset_set(5, 1);
    case Component::kCbCrQuarter: return offset_set(5, 2);
  }
  return offset_set(1, 1);
}

std::array<Batch, kNumComponents> decompose_batch(
    const std::vector<AugmentedImage>& augmented) {
  std::array<Batch, kNumComponents> out;
  for (const AugmentedImage& a : augmented) {
    PerceptualDecomposition d = decompose(a.image);
    for (Component c : kComponents) {
      out[static_cast<int>(c)].push_back({std::move(d[c]), a.spec.level});
    }
  }
  return out;
}

DecompositionFit fit_decomposition(const ImageRgb& img,
                                   const AugmentationPlan& geometric_plan,
                                   const AugmentationPlan& color_plan,
                                   const FitConfig& config, std::uint64_t seed) {
  config.validate();
  const PerceptualDecomposition base = decompose(img);
  const auto geo = decompose_batch(generate_batch(img, geometric_plan, seed));
  const auto col = decompose_batch(generate_batch(img, color_plan, seed));

  DecompositionFit out;
  for (Component c : kComponents) {
    const int i = static_cast<int>(c);
    const Batch& batch = c == Component::kCbCrQuarter ? col[i] : geo[i];
    FitResult fr = fit_supn(base[c], batch, component_layout(c), config);
    fr.params.component_id = component_name(c);
    out.params[i] = std::move(fr.params);
    out.traces[i] = std::move(fr.trace);
  }
  return out;
}

}  // namespace suss
