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

#include <gtest/gtest.h>

#include <omp.h>

#include <random>
#include <vector>

#include "suss/supn_kernels.hpp"
#include "test_support.hpp"

namespace suss {
namespace {

using testing::random_params;
using testing::random_plane;

struct Case {
  int window;
  int channels;
  int width;
  int height;
};

const Case kCases[] = {{1, 1, 5, 4}, {5, 1, 9, 7}, {8, 1, 11, 6},
                       {5, 2, 8, 8}, {8, 2, 7, 9}, {5, 2, 1, 1}};

TEST(Kernels, ParallelMatchesSerial) {
  std::mt19937_64 rng(7);
  for (const Case& c : kCases) {
    const SupnParams p = random_params(rng, c.window, c.channels, c.width, c.height);
    const Plane r = random_plane(rng, c.width, c.height, c.channels);
    const std::size_t n = r.size();
    std::vector<double> s_ser(n), s_par(n), v_ser(n), v_par(n);
    kernels::serial::whiten(p, r.data, s_ser);
    kernels::parallel::whiten(p, r.data, s_par);
    kernels::serial::apply_factor(p, s_ser, v_ser);
    kernels::parallel::apply_factor(p, s_ser, v_par);
    for (std::size_t k = 0; k < n; ++k) {
      EXPECT_NEAR(s_ser[k], s_par[k], 1e-12);
      EXPECT_NEAR(v_ser[k], v_par[k], 1e-12);
    }

    SupnGradient g_ser = SupnParams::zeros(p.layout, c.width, c.height);
    SupnGradient g_par = SupnParams::zeros(p.layout, c.width, c.height);
    kernels::serial::accumulate_param_grad(p, r.data, s_ser, v_ser, 0.5, g_ser);
    kernels::parallel::accumulate_param_grad(p, r.data, s_ser, v_ser, 0.5, g_par);
    EXPECT_LT(testing::max_abs_diff(g_ser.mu, g_par.mu), 1e-12);
    EXPECT_LT(testing::max_abs_diff(g_ser.log_diag, g_par.log_diag), 1e-12);
    for (std::size_t o = 0; o < p.off_diag.size(); ++o) {
      EXPECT_LT(testing::max_abs_diff(g_ser.off_diag[o], g_par.off_diag[o]), 1e-12);
    }
    if (c.channels == 2) EXPECT_LT(testing::max_abs_diff(g_ser.intra, g_par.intra), 1e-12);
  }
}

TEST(Kernels, ParallelIndependentOfThreadCount) {
  std::mt19937_64 rng(5);
  const SupnParams p = random_params(rng, 8, 2, 24, 20);
  const Plane r = random_plane(rng, 24, 20, 2);
  const std::size_t n = r.size();
  const int saved = omp_get_max_threads();
  std::vector<double> s1(n), s4(n);
  omp_set_num_threads(1);
  kernels::parallel::whiten(p, r.data, s1);
  const double q1 = kernels::parallel::squared_norm(p, s1);
  omp_set_num_threads(4);
  kernels::parallel::whiten(p, r.data, s4);
  const double q4 = kernels::parallel::squared_norm(p, s4);
  omp_set_num_threads(saved);
  EXPECT_EQ(s1, s4);
  EXPECT_EQ(q1, q4);
}

TEST(Kernels, ApplyFactorIsAdjointOfWhiten) {
  // <L^T a, b> == <a, L b>
  std::mt19937_64 rng(19);
  const SupnParams p = random_params(rng, 5, 2, 6, 5);
  const Plane a = random_plane(rng, 6, 5, 2);
  const Plane b = random_plane(rng, 6, 5, 2);
  std::vector<double> lta(a.size()), lb(a.size());
  kernels::serial::whiten(p, a.data, lta);
  kernels::serial::apply_factor(p, b.data, lb);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    lhs += lta[k] * b.data[k];
    rhs += a.data[k] * lb[k];
  }
  EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(lhs)));
}

TEST(Kernels, SolveTransposedInvertsWhiten) {
  std::mt19937_64 rng(23);
  for (const Case& c : kCases) {
    const SupnParams p = random_params(rng, c.window, c.channels, c.width, c.height);
    const Plane z = random_plane(rng, c.width, c.height, c.channels);
    std::vector<double> x(z.size()), back(z.size());
    kernels::solve_transposed(p, z.data, x);
    kernels::serial::whiten(p, x, back);
    for (std::size_t k = 0; k < z.size(); ++k) EXPECT_NEAR(back[k], z.data[k], 1e-10);
  }
}

}  // namespace
}  // namespace suss
