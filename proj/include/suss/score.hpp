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

// The similarity score: a weighted sum of component log-likelihoods of a
// candidate under the Gaussians fitted around a reference, plus the tools
// built on it (maps, symmetrisation, weight learning, loss-mode gradients).

#pragma once

#include <array>
#include <span>
#include <vector>

#include "suss/imaging.hpp"
#include "suss/supn.hpp"

namespace suss {

using ComponentParams = std::array<SupnParams, kNumComponents>;

/// Weights stored in log space, component order [y_full, y_half, y_quarter,
/// cbcr_quarter].
struct ComponentWeights {
  std::array<double, kNumComponents> log_w{};

  double weight(int c) const;
  std::array<double, kNumComponents> linear() const;
  static ComponentWeights from_linear(const std::array<double, kNumComponents>& w);
};

struct ScoreBreakdown {
  double total = 0.0;
  std::array<double, kNumComponents> per_component{};
  std::array<double, kNumComponents> per_component_weighted{};
};

/// Throws kShape unless the params match a decomposition of width x height.
void check_params_resolution(const ComponentParams& params, int width, int height);

ScoreBreakdown suss(const ComponentParams& params, const ImageRgb& candidate,
                    const ComponentWeights& weights);
ScoreBreakdown suss_decomposed(const ComponentParams& params,
                               const PerceptualDecomposition& candidate,
                               const ComponentWeights& weights);

/// Score of a candidate that decomposes exactly onto the means.
double suss_max(const ComponentParams& params, const ComponentWeights& weights);

/// 0.5 * (SUSS(A, B) + SUSS(B, A)); params_a were fitted around img_a.
double suss_symmetric(const ComponentParams& params_a, const ComponentParams& params_b,
                      const ImageRgb& img_a, const ImageRgb& img_b,
                      const ComponentWeights& weights);

struct AsymmetryReport {
  double mean_abs_asym = 0.0;
  double pearson = 0.0;
  double spearman = 0.0;
};

/// forward[i] = SUSS(A_i, B_i), backward[i] = SUSS(B_i, A_i).
AsymmetryReport asymmetry_report(std::span<const double> forward,
                                 std::span<const double> backward);

/// Full-resolution map with sum(map^2) = sum_c w_c |s_c|^2.
Plane suss_map(const ComponentParams& params, const ImageRgb& candidate,
               const ComponentWeights& weights);

/// d SUSS / d candidate pixels.
ImageRgb grad_suss_wrt_candidate(const ComponentParams& params, const ImageRgb& candidate,
                                 const ComponentWeights& weights);

struct TripletFeatures {
  std::array<double, kNumComponents> logp_y1{};
  std::array<double, kNumComponents> logp_y0{};
  double h = 0.5;  // human proportion preferring y1
};

/// Mean binary cross-entropy of sigmoid(SUSS(X,Y1) - SUSS(X,Y0)) against h.
double triplet_bce(std::span<const TripletFeatures> data, const ComponentWeights& weights);

struct WeightFitConfig {
  std::vector<double> grid_log10 = {-9, -8, -7, -6, -5, -4, -3};
  int refine_steps = 2000;
  double lr = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct WeightFitResult {
  ComponentWeights grid_weights;
  double grid_bce = 0.0;
  ComponentWeights weights;
  double refined_bce = 0.0;
};

/// Grid search over all 4-tuples of grid_log10, then Adam on the log-weights
/// from the best grid point, keeping the best iterate.
WeightFitResult fit_weights(std::span<const TripletFeatures> data,
                            const WeightFitConfig& config = {});

struct ReconstructResult {
  ImageRgb image;
  double best_score = 0.0;
  std::vector<double> scores;     // score of each iterate
  std::vector<double> best_so_far;
};

/// Projected Adam ascent on SUSS over pixel values clipped to [0,1].
ReconstructResult reconstruct(const ComponentParams& target_params, const ImageRgb& init,
                              const ComponentWeights& weights, int steps, double lr);

}  // namespace suss
