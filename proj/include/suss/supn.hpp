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

// Structured-uncertainty Gaussian N(mu, (L L^T)^-1) on a pixel lattice. L is
// lower triangular in raster order (Cb before Cr inside a pixel) and sparse:
// a variable couples only to earlier pixels within a causal window.
//
// Storage layout of the factor:
//   log_diag      one value per variable, L_ii = exp(log_diag_i)
//   off_diag[k]   for offset k = (dy, dx), a C x C block per anchor pixel p.
//                 Entry [a * C + b] is L(row = (p, a), col = (p - offset, b)).
//   intra         2-channel only: L(row = (p, Cr), col = (p, Cb)).
// Entries whose neighbor falls outside the image are structurally zero and
// are ignored everywhere.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "suss/imaging.hpp"

namespace suss {

struct Offset {
  int dy = 0;
  int dx = 0;
  bool operator==(const Offset&) const = default;
};

struct NeighborhoodLayout {
  int window = 1;
  int half_width = 0;
  int channels = 1;
  std::vector<Offset> offsets;

  int block() const { return channels * channels; }
  bool has_intra() const { return channels == 2; }
  bool operator==(const NeighborhoodLayout&) const = default;
};

/// Causal offsets for a window: {(0,dx): 1<=dx<=hw} then rows dy = 1..hw with
/// dx = -hw..hw, hw = window / 2. Window 5 gives 12 offsets, window 8 gives 40.
NeighborhoodLayout offset_set(int window, int channels = 1);

struct SupnParams {
  std::string component_id;
  NeighborhoodLayout layout;
  int width = 0;
  int height = 0;
  Plane mu;
  Plane log_diag;
  std::vector<Plane> off_diag;
  Plane intra;

  /// All-zero parameters (identity precision, zero mean).
  static SupnParams zeros(const NeighborhoodLayout& layout, int width, int height);

  int channels() const { return layout.channels; }
  std::size_t num_variables() const {
    return static_cast<std::size_t>(width) * height * layout.channels;
  }
  /// Throws kShape if any plane disagrees with the layout and dimensions.
  void check_consistent() const;
};

/// Gradient with respect to every stored parameter; same shape as the params.
using SupnGradient = SupnParams;

struct WhitenedResidual {
  Plane s;  // L^T (y - mu)
};

/// Sum over variables of log L_ii.
double log_det_factor(const SupnParams& params);

/// log N(y; mu, (L L^T)^-1), evaluated with the sparse whitening pass.
double log_prob(const SupnParams& params, const Plane& y);

/// Value of log_prob at y = mu.
double max_log_prob(const SupnParams& params);

WhitenedResidual whiten(const SupnParams& params, const Plane& y);

/// Exact draw from the Gaussian: mu + x where L^T x = z, z ~ N(0, I).
Plane sample(const SupnParams& params, std::uint64_t seed);

struct RankedSamples {
  Plane lowest;
  Plane median;
  Plane highest;
  double log_prob_lowest = 0.0;
  double log_prob_median = 0.0;
  double log_prob_highest = 0.0;
};

/// Draws `count` samples, returns those with the minimum, median and maximum
/// log-probability. Sample k uses seed derive_seed(seed, k).
RankedSamples sample_ranked(const SupnParams& params, int count, std::uint64_t seed);

/// d log p / d(mu, log_diag, off_diag, intra) at observation y.
SupnGradient grad_logprob_params(const SupnParams& params, const Plane& y);

/// d log p / d y = -L L^T (y - mu).
Plane grad_logprob_obs(const SupnParams& params, const Plane& y);

/// Dense n x n factor, row-major. Test oracle only; n <= 4096.
struct DenseMatrix {
  int n = 0;
  std::vector<double> values;
  double operator()(int r, int c) const {
    return values[static_cast<std::size_t>(r) * n + c];
  }
  double& operator()(int r, int c) { return values[static_cast<std::size_t>(r) * n + c]; }
};
DenseMatrix dense_materialize(const SupnParams& params);

/// Rounds every stored value to float32 precision (the container precision).
void round_to_storage(SupnParams& params);

/// Stable 64-bit seed mixing (splitmix64 finalizer over the combined words).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

}  // namespace suss
