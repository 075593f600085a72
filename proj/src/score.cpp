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

#include "suss/score.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "suss/error.hpp"
#include "suss/stats.hpp"

namespace suss {
namespace {

double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double logit_difference(const TripletFeatures& t,
                        const std::array<double, kNumComponents>& w) {
  double d = 0.0;
  for (int c = 0; c < kNumComponents; ++c) d += w[c] * (t.logp_y1[c] - t.logp_y0[c]);
  return d;
}

double bce_linear(std::span<const TripletFeatures> data,
                  const std::array<double, kNumComponents>& w) {
  double acc = 0.0;
  for (const TripletFeatures& t : data) {
    const double d = logit_difference(t, w);
    acc += t.h * softplus(-d) + (1.0 - t.h) * softplus(d);
  }
  return acc / static_cast<double>(data.size());
}

}  // namespace

double ComponentWeights::weight(int c) const { return std::exp(log_w[c]); }

std::array<double, kNumComponents> ComponentWeights::linear() const {
  std::array<double, kNumComponents> w;
  for (int c = 0; c < kNumComponents; ++c) w[c] = weight(c);
  return w;
}

ComponentWeights ComponentWeights::from_linear(const std::array<double, kNumComponents>& w) {
  ComponentWeights out;
  for (int c = 0; c < kNumComponents; ++c) {
    if (!(w[c] > 0.0) || !std::isfinite(w[c])) {
      throw_validation("component weights must be positive and finite");
    }
    out.log_w[c] = std::log(w[c]);
  }
  return out;
}

void check_params_resolution(const ComponentParams& params, int width, int height) {
  check_decomposable(width, height);
  const PerceptualDecomposition shape = zero_decomposition(width, height);
  for (Component c : kComponents) {
    const SupnParams& p = params[static_cast<int>(c)];
    if (!shape[c].same_shape(p.mu)) {
      throw_shape(std::string("resolution mismatch: ") + component_name(c) +
                  " params are " + std::to_string(p.width) + "x" +
                  std::to_string(p.height) + ", candidate gives " +
                  std::to_string(shape[c].width) + "x" + std::to_string(shape[c].height) +
                  " (candidate image " + std::to_string(width) + "x" +
                  std::to_string(height) + ", reference " +
                  std::to_string(params[0].width) + "x" +
                  std::to_string(params[0].height) + ")");
    }
  }
}

ScoreBreakdown suss_decomposed(const ComponentParams& params,
                               const PerceptualDecomposition& candidate,
                               const ComponentWeights& weights) {
  ScoreBreakdown out;
  for (int c = 0; c < kNumComponents; ++c) {
    out.per_component[c] = log_prob(params[c], candidate.planes[c]);
    out.per_component_weighted[c] = weights.weight(c) * out.per_component[c];
  }
  for (int c = 0; c < kNumComponents; ++c) out.total += out.per_component_weighted[c];
  return out;
}

ScoreBreakdown suss(const ComponentParams& params, const ImageRgb& candidate,
                    const ComponentWeights& weights) {
  check_params_resolution(params, candidate.width, candidate.height);
  return suss_decomposed(params, decompose(candidate), weights);
}

double suss_max(const ComponentParams& params, const ComponentWeights& weights) {
  double total = 0.0;
  for (int c = 0; c < kNumComponents; ++c) {
    total += weights.weight(c) * max_log_prob(params[c]);
  }
  return total;
}

double suss_symmetric(const ComponentParams& params_a, const ComponentParams& params_b,
                      const ImageRgb& img_a, const ImageRgb& img_b,
                      const ComponentWeights& weights) {
  const double ab = suss(params_a, img_b, weights).total;
  const double ba = suss(params_b, img_a, weights).total;
  return 0.5 * (ab + ba);
}

AsymmetryReport asymmetry_report(std::span<const double> forward,
                                 std::span<const double> backward) {
  if (forward.size() != backward.size()) throw_shape("asymmetry_report: length mismatch");
  if (forward.size() < 2) throw_validation("asymmetry_report: needs at least 2 pairs");
  AsymmetryReport r;
  for (std::size_t i = 0; i < forward.size(); ++i) {
    r.mean_abs_asym += std::abs(forward[i] - backward[i]);
  }
  r.mean_abs_asym /= static_cast<double>(forward.size());
  r.pearson = pearson(forward, backward);
  r.spearman = spearman(forward, backward);
  return r;
}

Plane suss_map(const ComponentParams& params, const ImageRgb& candidate,
               const ComponentWeights& weights) {
  check_params_resolution(params, candidate.width, candidate.height);
  const PerceptualDecomposition d = decompose(candidate);
  Plane energy(candidate.width, candidate.height, 1);
  for (Component comp : kComponents) {
    const int c = static_cast<int>(comp);
    const Plane s = whiten(params[c], d[comp]).s;
    const int f = component_scale(comp);
    const double scale = weights.weight(c) / (f * f);
    for (int y = 0; y < energy.height; ++y) {
      for (int x = 0; x < energy.width; ++x) {
        double acc = 0.0;
        for (int ch = 0; ch < s.channels; ++ch) {
          const double v = s.at(x / f, y / f, ch);
          acc += v * v;
        }
        energy.at(x, y) += scale * acc;
      }
    }
  }
  for (double& v : energy.data) v = std::sqrt(v);
  return energy;
}

ImageRgb grad_suss_wrt_candidate(const ComponentParams& params, const ImageRgb& candidate,
                                 const ComponentWeights& weights) {
  check_params_resolution(params, candidate.width, candidate.height);
  const PerceptualDecomposition d = decompose(candidate);
  PerceptualDecomposition g;
  for (int c = 0; c < kNumComponents; ++c) {
    g.planes[c] = grad_logprob_obs(params[c], d.planes[c]);
    const double w = weights.weight(c);
    for (double& v : g.planes[c].data) v *= w;
  }
  return decompose_adjoint(g, candidate.width, candidate.height);
}

double triplet_bce(std::span<const TripletFeatures> data, const ComponentWeights& weights) {
  if (data.empty()) throw_validation("triplet_bce: empty dataset");
  return bce_linear(data, weights.linear());
}

WeightFitResult fit_weights(std::span<const TripletFeatures> data,
                            const WeightFitConfig& config) {
  if (data.empty()) throw_validation("fit_weights: empty dataset");
  for (const TripletFeatures& t : data) {
    if (!(t.h >= 0.0 && t.h <= 1.0)) throw_validation("fit_weights: h outside [0,1]");
  }
  if (config.grid_log10.empty()) throw_validation("fit_weights: empty grid");

  WeightFitResult result;
  result.grid_bce = std::numeric_limits<double>::infinity();
  const std::size_t g = config.grid_log10.size();
  std::array<std::size_t, kNumComponents> idx{};
  for (std::size_t flat = 0; flat < g * g * g * g; ++flat) {
    std::size_t rem = flat;
    std::array<double, kNumComponents> w;
    for (int c = kNumComponents - 1; c >= 0; --c) {
      idx[c] = rem % g;
      rem /= g;
      w[c] = std::pow(10.0, config.grid_log10[idx[c]]);
    }
    const double bce = bce_linear(data, w);
    if (bce < result.grid_bce) {
      result.grid_bce = bce;
      result.grid_weights = ComponentWeights::from_linear(w);
    }
  }

  ComponentWeights current = result.grid_weights;
  result.weights = current;
  result.refined_bce = result.grid_bce;
  std::array<double, kNumComponents> m{}, v{};
  for (int step = 1; step <= config.refine_steps; ++step) {
    const std::array<double, kNumComponents> w = current.linear();
    std::array<double, kNumComponents> grad{};
    for (const TripletFeatures& t : data) {
      const double err = sigmoid(logit_difference(t, w)) - t.h;
      for (int c = 0; c < kNumComponents; ++c) {
        grad[c] += err * w[c] * (t.logp_y1[c] - t.logp_y0[c]);
      }
    }
    const double c1 = 1.0 - std::pow(config.beta1, step);
    const double c2 = 1.0 - std::pow(config.beta2, step);
    for (int c = 0; c < kNumComponents; ++c) {
      grad[c] /= static_cast<double>(data.size());
      m[c] = config.beta1 * m[c] + (1.0 - config.beta1) * grad[c];
      v[c] = config.beta2 * v[c] + (1.0 - config.beta2) * grad[c] * grad[c];
      current.log_w[c] -= config.lr * (m[c] / c1) / (std::sqrt(v[c] / c2) + config.eps);
    }
    const double bce = bce_linear(data, current.linear());
    if (bce < result.refined_bce) {
      result.refined_bce = bce;
      result.weights = current;
    }
  }
  return result;
}

ReconstructResult reconstruct(const ComponentParams& target_params, const ImageRgb& init,
                              const ComponentWeights& weights, int steps, double lr) {
  check_params_resolution(target_params, init.width, init.height);
  if (steps < 0) throw_validation("reconstruct: steps must be >= 0");
  if (!(lr > 0.0)) throw_validation("reconstruct: lr must be > 0");
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;

  ImageRgb x = init;
  for (double& v : x.data) v = std::clamp(v, 0.0, 1.0);
  std::vector<double> m(x.data.size(), 0.0), s(x.data.size(), 0.0);

  ReconstructResult out;
  double score = suss(target_params, x, weights).total;
  out.image = x;
  out.best_score = score;
  out.scores.push_back(score);
  out.best_so_far.push_back(score);
  for (int step = 1; step <= steps; ++step) {
    const ImageRgb g = grad_suss_wrt_candidate(target_params, x, weights);
    const double c1 = 1.0 - std::pow(kBeta1, step);
    const double c2 = 1.0 - std::pow(kBeta2, step);
    for (std::size_t k = 0; k < x.data.size(); ++k) {
      m[k] = kBeta1 * m[k] + (1.0 - kBeta1) * g.data[k];
      s[k] = kBeta2 * s[k] + (1.0 - kBeta2) * g.data[k] * g.data[k];
      x.data[k] = std::clamp(x.data[k] + lr * (m[k] / c1) / (std::sqrt(s[k] / c2) + kEps),
                             0.0, 1.0);
    }
    score = suss(target_params, x, weights).total;
    if (!std::isfinite(score)) throw_numeric("reconstruct: non-finite score");
    out.scores.push_back(score);
    if (score > out.best_score) {
      out.best_score = score;
      out.image = x;
    }
    out.best_so_far.push_back(out.best_score);
  }
  return out;
}

}  // namespace suss
