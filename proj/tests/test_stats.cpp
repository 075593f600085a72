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

#include <cmath>
#include <random>

#include "suss/error.hpp"
#include "suss/stats.hpp"

namespace suss {
namespace {

using V = std::vector<double>;

// Kendall tau-b by direct pair enumeration.
double kendall_brute(const V& x, const V& y) {
  double concordant = 0, discordant = 0, tx = 0, ty = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        ++tx;
      } else if (dy == 0) {
        ++ty;
      } else if (dx * dy > 0) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  return (concordant - discordant) /
         std::sqrt((concordant + discordant + tx) * (concordant + discordant + ty));
}

TEST(Stats, Examples) {
  const V x = {1, 2, 3, 4, 5};
  const V up = {2, 3, 10, 11, 40};
  EXPECT_DOUBLE_EQ(spearman(x, up), 1.0);
  EXPECT_DOUBLE_EQ(kendall(x, up), 1.0);
  EXPECT_NEAR(kendall(V{1, 2, 3}, V{1, 3, 2}), 1.0 / 3.0, 1e-15);
  V neg;
  for (double v : x) neg.push_back(-v);
  EXPECT_NEAR(pearson(x, neg), -1.0, 1e-15);
}

TEST(Stats, AverageRanks) {
  EXPECT_EQ(average_ranks(V{10, 20, 20, 5}), (V{2, 3.5, 3.5, 1}));
}

TEST(Stats, Errors) {
  EXPECT_THROW(pearson(V{1, 1, 1}, V{1, 2, 3}), Error);
  EXPECT_THROW(spearman(V{1, 2}, V{3, 3}), Error);
  EXPECT_THROW(kendall(V{1, 1, 1}, V{1, 2, 3}), Error);
  EXPECT_THROW(pearson(V{1}, V{1}), Error);
  EXPECT_THROW(pearson(V{1, 2}, V{1, 2, 3}), Error);
}

TEST(Stats, KendallMatchesBruteForceWithTies) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(0, 5);
  for (int trial = 0; trial < 50; ++trial) {
    V x(15), y(15);
    for (double& v : x) v = d(rng);
    for (double& v : y) v = d(rng);
    EXPECT_NEAR(kendall(x, y), kendall_brute(x, y), 1e-12);
  }
}

TEST(Stats, Invariances) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  V x(40), y(40);
  for (double& v : x) v = n(rng);
  for (double& v : y) v = n(rng) + 0.5 * x[&v - y.data()];
  V mono, affine;
  for (double v : x) {
    mono.push_back(std::exp(3.0 * v));
    affine.push_back(2.5 * v - 7.0);
  }
  EXPECT_NEAR(spearman(mono, y), spearman(x, y), 1e-12);
  EXPECT_NEAR(kendall(mono, y), kendall(x, y), 1e-12);
  EXPECT_NEAR(pearson(affine, y), pearson(x, y), 1e-12);
  for (double r : {pearson(x, y), spearman(x, y), kendall(x, y)}) {
    EXPECT_GE(r, -1.0);
    EXPECT_LE(r, 1.0);
  }
}

}  // namespace
}  // namespace suss
