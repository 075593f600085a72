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

// Lattice kernels behind the SUPN operations. Two implementations are kept:
//
//   serial::    scatter formulation walking the stored entries of L once,
//               single threaded. This is the reference the tests compare to.
//   parallel::  gather formulation, one output pixel per iteration, OpenMP
//               over rows. Each output is summed in a fixed order, so results
//               do not depend on the thread count.
//
// Residual / output spans are laid out like params.mu.

#pragma once

#include <span>

#include "suss/supn.hpp"

namespace suss::kernels {

namespace serial {

/// s = L^T r
void whiten(const SupnParams& params, std::span<const double> r, std::span<double> s);
/// v = L s
void apply_factor(const SupnParams& params, std::span<const double> s,
                  std::span<double> v);
/// grad += weight * d log p / d theta given r, s = L^T r and ls = L s.
void accumulate_param_grad(const SupnParams& params, std::span<const double> r,
                           std::span<const double> s, std::span<const double> ls,
                           double weight, SupnGradient& grad);

}  // namespace serial

namespace parallel {

void whiten(const SupnParams& params, std::span<const double> r, std::span<double> s);
void apply_factor(const SupnParams& params, std::span<const double> s,
                  std::span<double> v);
void accumulate_param_grad(const SupnParams& params, std::span<const double> r,
                           std::span<const double> s, std::span<const double> ls,
                           double weight, SupnGradient& grad);
/// Sum of squares with per-row partials reduced in row order.
double squared_norm(const SupnParams& params, std::span<const double> s);

}  // namespace parallel

/// Solves L^T x = z by back-substitution in reverse variable order.
void solve_transposed(const SupnParams& params, std::span<const double> z,
                      std::span<double> x);

}  // namespace suss::kernels
