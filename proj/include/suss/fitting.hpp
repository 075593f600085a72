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

// Per-image self-supervised fitting of SUPN parameters: minimise the
// level-weighted negative log-likelihood of augmented copies of a component,
// optionally with a hinge ranking term over per-level mean log-probabilities.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "suss/augment.hpp"
#include "suss/imaging.hpp"
#include "suss/supn.hpp"

namespace suss {

struct FitConfig {
  int steps = 400;
  double lr_mu = 1e-3;
  double lr_logdiag = 1e-2;
  double lr_offdiag = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double eps = 1e-8;
  double weight_decay_offdiag = 1e-3;
  bool freeze_mu = true;
  double rank_margin = 1.0;
  double rank_weight = 0.0;

  /// Throws kValidation on out-of-range values.
  void validate() const;
};

struct BatchItem {
  Plane component;
  int level = 0;
};
using Batch = std::vector<BatchItem>;

/// w_l = 1 / (l + 1).
double level_weight(int level);

struct FitTrace {
  std::vector<double> objective;  // one value per step, before the update
  double initial_objective = 0.0;
  double best_objective = 0.0;
  int restarts = 0;
  /// Mean log-prob per level at the returned parameters (NaN if absent).
  std::array<double, kNumLevels> final_level_logp{};
};

struct FitResult {
  SupnParams params;
  FitTrace trace;
};

/// mu = component, off-diagonals zero, log_diag = -log(max(std, 1e-3)) where
/// std is the pooled standard deviation of (probe - component) residuals.
/// Values are rounded to container precision.
SupnParams init_params(const Plane& component, const NeighborhoodLayout& layout,
                       const Batch& probe);

/// Sum over the batch of w_l * (-log p).
double supn_nll(const SupnParams& params, const Batch& batch);

/// Gradient of supn_nll with respect to every parameter.
SupnGradient supn_nll_grad(const SupnParams& params, const Batch& batch);

/// Mean log-prob of the batch items at each level (NaN where a level is absent).
std::array<double, kNumLevels> mean_logp_by_level(const SupnParams& params,
                                                  const Batch& batch);

/// sum_l max(0, margin + v[l+1] - v[l]) over consecutive entries.
double ranking_loss_r(std::span<const double> mean_logp_by_level, double margin);
/// d ranking_loss_r / d v.
std::vector<double> ranking_loss_r_grad(std::span<const double> mean_logp_by_level,
                                        double margin);

/// 1 - Pearson(logps, human_scores).
double ranking_loss_rh(std::span<const double> logps, std::span<const double> human);
std::vector<double> ranking_loss_rh_grad(std::span<const double> logps,
                                         std::span<const double> human);

/// Full objective used by fit_supn: supn_nll + rank_weight * ranking_loss_r
/// over present levels + weight_decay_offdiag * |off_diag|^2.
double fit_objective(const SupnParams& params, const Batch& batch, const FitConfig& config);

FitResult fit_supn(const Plane& component, const Batch& batch,
                   const NeighborhoodLayout& layout, const FitConfig& config);

/// Window and channel count used for each component: 8, 8, 5, 5 (2-channel).
NeighborhoodLayout component_layout(Component c);

/// Splits augmented images into per-component batches.
std::array<Batch, kNumComponents> decompose_batch(const std::vector<AugmentedImage>& augmented);

struct DecompositionFit {
  std::array<SupnParams, kNumComponents> params;
  std::array<FitTrace, kNumComponents> traces;
};

/// Geometric augmentations feed the three Y components, color augmentations
/// feed cbcr_quarter.
DecompositionFit fit_decomposition(const ImageRgb& img,
                                   const AugmentationPlan& geometric_plan,
                                   const AugmentationPlan& color_plan,
                                   const FitConfig& config, std::uint64_t seed);

}  // namespace suss
