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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "suss/error.hpp"
#include "suss/supn.hpp"
#include "suss/supn_kernels.hpp"

namespace suss {
namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;  // log(2 pi)

void check_observation(const SupnParams& params, const Plane& y, const char* op) {
  if (!y.same_shape(params.mu)) {
    throw_shape(std::string(op) + ": observation is " + std::to_string(y.width) + "x" +
                std::to_string(y.height) + "x" + std::to_string(y.channels) +
                ", params are " + std::to_string(params.width) + "x" +
                std::to_string(params.height) + "x" + std::to_string(params.channels()));
  }
}

Plane residual(const SupnParams& params, const Plane& y) {
  Plane r(y.width, y.height, y.channels);
  for (std::size_t k = 0; k < r.size(); ++k) r.data[k] = y.data[k] - params.mu.data[k];
  return r;
}

}  // namespace

double log_det_factor(const SupnParams& params) {
  // Fixed summation order keeps this reproducible.
  return std::accumulate(params.log_diag.data.begin(), params.log_diag.data.end(), 0.0);
}

double max_log_prob(const SupnParams& params) {
  return log_det_factor(params) -
         0.5 * static_cast<double>(params.num_variables()) * kLog2Pi;
}

WhitenedResidual whiten(const SupnParams& params, const Plane& y) {
  check_observation(params, y, "whiten");
  const Plane r = residual(params, y);
  WhitenedResidual out{Plane(y.width, y.height, y.channels)};
  kernels::parallel::whiten(params, r.data, out.s.data);
  return out;
}

double log_prob(const SupnParams& params, const Plane& y) {
  check_observation(params, y, "log_prob");
  for (double v : y.data) {
    if (!std::isfinite(v)) throw_numeric("log_prob: non-finite observation value");
  }
  const WhitenedResidual w = whiten(params, y);
  return max_log_prob(params) - 0.5 * kernels::parallel::squared_norm(params, w.s.data);
}

Plane sample(const SupnParams& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z(params.num_variables());
  for (double& v : z) v = normal(rng);
  Plane x(params.width, params.height, params.channels());
  kernels::solve_transposed(params, z, x.data);
  for (std::size_t k = 0; k < x.size(); ++k) x.data[k] += params.mu.data[k];
  return x;
}

RankedSamples sample_ranked(const SupnParams& params, int count, std::uint64_t seed) {
  if (count < 3) throw_validation("sample_ranked: count must be >= 3");
  std::vector<double> scores(count);
  for (int k = 0; k < count; ++k) {
    scores[k] = log_prob(params, sample(params, derive_seed(seed, k)));
  }
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] < scores[b]; });
  const int lo = order.front(), med = order[count / 2], hi = order.back();
  RankedSamples out;
  out.lowest = sample(params, derive_seed(seed, lo));
  out.median = sample(params, derive_seed(seed, med));
  out.highest = sample(params, derive_seed(seed, hi));
  out.log_prob_lowest = scores[lo];
  out.log_prob_median = scores[med];
  out.log_prob_highest = scores[hi];
  return out;
}

SupnGradient grad_logprob_params(const SupnParams& params, const Plane& y) {
  check_observation(params, y, "grad_logprob_params");
  const Plane r = residual(params, y);
  std::vector<double> s(r.size()), ls(r.size());
  kernels::parallel::whiten(params, r.data, s);
  kernels::parallel::apply_factor(params, s, ls);
  SupnGradient grad = SupnParams::zeros(params.layout, params.width, params.height);
  grad.component_id = params.component_id;
  kernels::parallel::accumulate_param_grad(params, r.data, s, ls, 1.0, grad);
  return grad;
}

Plane grad_logprob_obs(const SupnParams& params, const Plane& y) {
  check_observation(params, y, "grad_logprob_obs");
  const Plane r = residual(params, y);
  std::vector<double> s(r.size());
  kernels::parallel::whiten(params, r.data, s);
  Plane g(y.width, y.height, y.channels);
  kernels::parallel::apply_factor(params, s, g.data);
  for (double& v : g.data) v = -v;
  return g;
}

DenseMatrix dense_materialize(const SupnParams& params) {
  const std::size_t n = params.num_variables();
  if (n > 4096) {
    throw_validation("dense_materialize: " + std::to_string(n) +
                     " variables exceeds the 4096 cap");
  }
  const int W = params.width, H = params.height, C = params.channels();
  DenseMatrix m;
  m.n = static_cast<int>(n);
  m.values.assign(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    m(static_cast<int>(k), static_cast<int>(k)) = std::exp(params.log_diag.data[k]);
  }
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const int pixel = y * W + x;
      for (std::size_t o = 0; o < params.layout.offsets.size(); ++o) {
        const Offset off = params.layout.offsets[o];
        const int nx = x - off.dx, ny = y - off.dy;
        if (nx < 0 || nx >= W || ny < 0 || ny >= H) continue;
        const int neighbor = ny * W + nx;
        for (int a = 0; a < C; ++a) {
          for (int b = 0; b < C; ++b) {
            m(pixel * C + a, neighbor * C + b) =
                params.off_diag[o].data[static_cast<std::size_t>(pixel) * C * C + a * C + b];
          }
        }
      }
      if (C == 2) m(pixel * 2 + 1, pixel * 2) = params.intra.data[pixel];
    }
  }
  return m;
}

}  // namespace suss
