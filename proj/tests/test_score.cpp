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
#include <numbers>
#include <random>

#include "suss/error.hpp"
#include "suss/fitting.hpp"
#include "suss/score.hpp"
#include "suss/stats.hpp"
#include "test_support.hpp"

namespace suss {
namespace {

using testing::rel_err;

// Random factors per component layout, means at decompose(reference).
ComponentParams params_around(std::mt19937_64& rng, const ImageRgb& reference,
                              double coupling = 0.3) {
  const PerceptualDecomposition d = decompose(reference);
  ComponentParams out;
  for (Component c : kComponents) {
    const NeighborhoodLayout l = component_layout(c);
    const int i = static_cast<int>(c);
    out[i] = testing::random_params(rng, l.window, l.channels, d[c].width, d[c].height,
                                    coupling);
    out[i].mu = d[c];
  }
  return out;
}

ImageRgb perturb(const ImageRgb& img, std::mt19937_64& rng, double sigma) {
  std::normal_distribution<double> normal(0.0, sigma);
  ImageRgb out = img;
  for (double& v : out.data) v = std::clamp(v + normal(rng), 0.0, 1.0);
  return out;
}

TEST(Weights, LinearRoundTripAndPublishedVector) {
  const std::array<double, 4> published = {8.3633e-6, 4.1081e-8, 6.3725e-5, 6.0119e-6};
  const ComponentWeights w = ComponentWeights::from_linear(published);
  for (int c = 0; c < 4; ++c) EXPECT_LT(rel_err(w.weight(c), published[c]), 1e-14);
  EXPECT_THROW(ComponentWeights::from_linear({1.0, 0.0, 1.0, 1.0}), Error);
  EXPECT_THROW(ComponentWeights::from_linear({1.0, -1.0, 1.0, 1.0}), Error);

  std::mt19937_64 rng(1);
  const ImageRgb x = testing::synthetic_image(1, 16, 16);
  const ComponentParams p = params_around(rng, x);
  const ImageRgb y = perturb(x, rng, 0.05);
  const ScoreBreakdown b = suss(p, y, w);
  for (int c = 0; c < 4; ++c) {
    EXPECT_EQ(b.per_component_weighted[c], w.weight(c) * b.per_component[c]);
  }
}

TEST(Suss, BreakdownConsistency) {
  std::mt19937_64 rng(2);
  const ImageRgb x = testing::synthetic_image(2, 16, 8);
  const ComponentParams p = params_around(rng, x);
  ComponentWeights w;
  w.log_w = {0.1, -0.4, 0.7, -1.2};
  for (int trial = 0; trial < 10; ++trial) {
    const ScoreBreakdown b = suss(p, perturb(x, rng, 0.05), w);
    double total = 0.0;
    for (int c = 0; c < 4; ++c) total += b.per_component_weighted[c];
    EXPECT_EQ(b.total, total);
  }
}

TEST(Suss, IdentityIsGlobalMaximum) {
  const ImageRgb x = testing::synthetic_image(3, 16, 16);
  FitConfig cfg;
  cfg.steps = 5;
  const DecompositionFit fit =
      fit_decomposition(x, default_geometric_plan(), default_color_plan(), cfg, 1);
  const ComponentParams& p = fit.params;
  ComponentWeights w;
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  double expected = 0.0;
  for (const SupnParams& c : p) {
    expected += log_det_factor(c) - static_cast<double>(c.num_variables()) * half_log_2pi;
  }
  const double at_x = suss(p, x, w).total;
  EXPECT_LT(rel_err(at_x, expected), 1e-12);
  // mu is held at float32 storage precision, so r is ~1e-8 rather than 0.
  EXPECT_LT(rel_err(at_x, suss_max(p, w)), 1e-12);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) EXPECT_LT(suss(p, perturb(x, rng, 0.02), w).total, at_x);
}

TEST(Suss, ResolutionMismatch) {
  std::mt19937_64 rng(4);
  const ComponentParams p = params_around(rng, testing::synthetic_image(4, 16, 16));
  try {
    suss(p, ImageRgb(32, 16), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kShape);
    EXPECT_NE(std::string(e.what()).find("16"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("32"), std::string::npos);
  }
  EXPECT_THROW(suss_map(p, ImageRgb(16, 12), {}), Error);
}

TEST(Suss, WeightScalingProperties) {
  std::mt19937_64 rng(5);
  const ImageRgb x = testing::synthetic_image(5, 16, 16);
  const ComponentParams p = params_around(rng, x);
  const ImageRgb y0 = perturb(x, rng, 0.05);
  const ImageRgb y1 = perturb(x, rng, 0.08);
  ComponentWeights w;
  w.log_w = {0.3, -0.2, 0.5, 0.0};
  const ScoreBreakdown base = suss(p, y0, w);
  ComponentWeights scaled = w;
  scaled.log_w[2] += std::log(3.0);
  const ScoreBreakdown b = suss(p, y0, scaled);
  for (int c = 0; c < 4; ++c) {
    const double expected = c == 2 ? 3.0 * base.per_component_weighted[c]
                                   : base.per_component_weighted[c];
    EXPECT_LT(rel_err(b.per_component_weighted[c], expected), 1e-14);
  }
  // 2AFC decision invariant under a common positive factor.
  for (double factor : {1e-6, 0.5, 7.0, 1e4}) {
    ComponentWeights all = w;
    for (double& lw : all.log_w) lw += std::log(factor);
    EXPECT_EQ(suss(p, y1, w).total > suss(p, y0, w).total,
              suss(p, y1, all).total > suss(p, y0, all).total);
  }
}

TEST(SussSymmetric, Properties) {
  std::mt19937_64 rng(6);
  const ImageRgb a = testing::synthetic_image(6, 16, 16);
  const ImageRgb b = perturb(a, rng, 0.1);
  const ComponentParams pa = params_around(rng, a);
  const ComponentParams pb = params_around(rng, b);
  ComponentWeights w;
  w.log_w = {0.2, 0.1, -0.3, 0.4};
  const double ab = suss_symmetric(pa, pb, a, b, w);
  EXPECT_EQ(ab, suss_symmetric(pb, pa, b, a, w));
  EXPECT_EQ(ab, 0.5 * (suss(pa, b, w).total + suss(pb, a, w).total));
  EXPECT_EQ(suss_symmetric(pa, pa, a, a, w), suss(pa, a, w).total);
}

TEST(AsymmetryReport, Properties) {
  const std::vector<double> f = {1.0, 3.0, 2.0, 5.0};
  const AsymmetryReport same = asymmetry_report(f, f);
  EXPECT_EQ(same.mean_abs_asym, 0.0);
  EXPECT_NEAR(same.pearson, 1.0, 1e-15);
  EXPECT_NEAR(same.spearman, 1.0, 1e-15);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(30), y(30);
  for (double& v : x) v = normal(rng);
  for (double& v : y) v = normal(rng);
  const AsymmetryReport r = asymmetry_report(x, y);
  double mad = 0.0, mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mad += std::abs(x[i] - y[i]) / x.size();
    mx += x[i] / x.size();
    my += y[i] / y.size();
  }
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  EXPECT_NEAR(r.mean_abs_asym, mad, 1e-12);
  EXPECT_NEAR(r.pearson, sxy / std::sqrt(sxx * syy), 1e-12);
  EXPECT_NEAR(r.spearman, pearson(average_ranks(x), average_ranks(y)), 1e-12);
  EXPECT_THROW(asymmetry_report(std::vector<double>{1.0}, std::vector<double>{1.0}), Error);
  const std::vector<double> flat(4, 1.0);
  EXPECT_THROW(asymmetry_report(flat, f), Error);
}

TEST(SussMap, ZeroAtReferenceAndEnergyIdentity) {
  std::mt19937_64 rng(8);
  const ImageRgb x = testing::synthetic_image(8, 16, 16);
  const ComponentParams p = params_around(rng, x);
  ComponentWeights w;
  w.log_w = {0.0, -0.5, 0.3, 0.8};
  for (double v : suss_map(p, x, w).data) EXPECT_EQ(v, 0.0);

  for (int trial = 0; trial < 10; ++trial) {
    const ImageRgb y = perturb(x, rng, 0.1);
    const Plane map = suss_map(p, y, w);
    double lhs = 0.0;
    for (double v : map.data) {
      EXPECT_GE(v, 0.0);
      lhs += v * v;
    }
    const PerceptualDecomposition d = decompose(y);
    double rhs = 0.0;
    for (int c = 0; c < 4; ++c) {
      const Plane s = whiten(p[c], d.planes[c]).s;
      rhs += w.weight(c) * dot(s, s);
    }
    EXPECT_LT(rel_err(lhs, rhs), 1e-9);
  }
}

TEST(SussMap, SinglePixelResidualSupport) {
  const ImageRgb x = testing::synthetic_image(9, 16, 16);
  ImageRgb y = x;
  y.at(5, 9, 0) += 0.2;
  y.at(5, 9, 1) += 0.1;
  const PerceptualDecomposition dx = decompose(x);
  const PerceptualDecomposition dy = decompose(y);
  ComponentParams p;
  for (Component c : kComponents) {
    const int i = static_cast<int>(c);
    const NeighborhoodLayout l =
        c == Component::kYFull ? offset_set(1) : component_layout(c);
    p[i] = SupnParams::zeros(l, dx[c].width, dx[c].height);
    p[i].mu = c == Component::kYFull ? dx[c] : dy[c];
  }
  const Plane map = suss_map(p, y, {});
  for (int yy = 0; yy < 16; ++yy) {
    for (int xx = 0; xx < 16; ++xx) {
      if (xx == 5 && yy == 9) {
        EXPECT_GT(map.at(xx, yy), 0.0);
      } else {
        EXPECT_EQ(map.at(xx, yy), 0.0);
      }
    }
  }
}

TEST(Gradient, ZeroAtReference) {
  std::mt19937_64 rng(10);
  const ImageRgb x = testing::synthetic_image(10, 8, 8);
  const ComponentParams p = params_around(rng, x);
  for (double v : grad_suss_wrt_candidate(p, x, {}).data) EXPECT_EQ(v, 0.0);
}

TEST(Gradient, FiniteDifferences8x8) {
  std::mt19937_64 rng(11);
  const ImageRgb x = testing::synthetic_image(11, 8, 8);
  const ComponentParams p = params_around(rng, x);
  ComponentWeights w;
  w.log_w = {0.2, -0.3, 0.1, 0.5};
  ImageRgb y = perturb(x, rng, 0.1);
  const ImageRgb g = grad_suss_wrt_candidate(p, y, w);
  constexpr double h = 1e-5;
  double worst = 0.0;
  for (std::size_t k = 0; k < y.data.size(); ++k) {
    const double keep = y.data[k];
    y.data[k] = keep + h;
    const double up = suss(p, y, w).total;
    y.data[k] = keep - h;
    const double down = suss(p, y, w).total;
    y.data[k] = keep;
    worst = std::max(worst, rel_err((up - down) / (2 * h), g.data[k], 1e-3));
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(Gradient, SmallStepIncreasesScore) {
  std::mt19937_64 rng(12);
  const ImageRgb x = testing::synthetic_image(12, 16, 16);
  for (int trial = 0; trial < 10; ++trial) {
    const ComponentParams p = params_around(rng, x);
    ImageRgb y = perturb(x, rng, 0.1);
    const double before = suss(p, y, {}).total;
    const ImageRgb g = grad_suss_wrt_candidate(p, y, {});
    double norm = 0.0;
    for (double v : g.data) norm += v * v;
    const double step = 1e-4 / std::sqrt(norm);
    for (std::size_t k = 0; k < y.data.size(); ++k) y.data[k] += step * g.data[k];
    EXPECT_GT(suss(p, y, {}).total, before);
  }
}

TEST(TripletBce, EqualLogProbsGiveLn2) {
  std::vector<TripletFeatures> data(5);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (TripletFeatures& t : data) {
    for (int c = 0; c < 4; ++c) t.logp_y1[c] = t.logp_y0[c] = -1e3 * u(rng);
    t.h = u(rng);
  }
  ComponentWeights w;
  w.log_w = {-3.0, 2.0, 0.5, -10.0};
  EXPECT_NEAR(triplet_bce(data, w), std::log(2.0), 1e-15);
  EXPECT_THROW(triplet_bce({}, w), Error);
}

TEST(FitWeights, SeparableComponentDominates) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<TripletFeatures> data(200);
  for (TripletFeatures& t : data) {
    t.h = u(rng) < 0.5 ? 0.0 : 1.0;
    for (int c = 0; c < 4; ++c) {
      t.logp_y0[c] = -1e5 * u(rng);
      t.logp_y1[c] = -1e5 * u(rng);
    }
    // Component 2 carries the judgment with a large margin.
    const double margin = (2.0e4 + 1e4 * u(rng)) * (t.h > 0.5 ? 1.0 : -1.0);
    t.logp_y1[2] = t.logp_y0[2] + margin;
  }
  const WeightFitResult r = fit_weights(data);
  EXPECT_LE(r.refined_bce, r.grid_bce);
  EXPECT_LT(r.refined_bce, 0.1 * std::log(2.0));
  EXPECT_NEAR(triplet_bce(data, r.weights), r.refined_bce, 1e-12);
  const auto lin = r.weights.linear();
  EXPECT_GE(lin[2] / (lin[0] + lin[1] + lin[2] + lin[3]), 0.9);
}

TEST(FitWeights, RefinementNeverWorseAndErrors) {
  std::mt19937_64 rng(15);
  std::normal_distribution<double> normal(0.0, 1e4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<TripletFeatures> data(50);
  for (TripletFeatures& t : data) {
    for (int c = 0; c < 4; ++c) {
      t.logp_y0[c] = normal(rng);
      t.logp_y1[c] = normal(rng);
    }
    t.h = u(rng);
  }
  WeightFitConfig cfg;
  cfg.refine_steps = 200;
  const WeightFitResult r = fit_weights(data, cfg);
  EXPECT_LE(r.refined_bce, r.grid_bce);
  EXPECT_THROW(fit_weights({}), Error);
  data[0].h = 1.5;
  EXPECT_THROW(fit_weights(data, cfg), Error);
}

TEST(Reconstruct, InitAtTargetStaysAtMaximum) {
  std::mt19937_64 rng(16);
  const ImageRgb x = testing::synthetic_image(16, 16, 16);
  const ComponentParams p = params_around(rng, x);
  const ReconstructResult r = reconstruct(p, x, {}, 10, 1e-2);
  EXPECT_EQ(r.best_score, suss_max(p, {}));
  EXPECT_EQ(r.image.data, x.data);
}

TEST(Reconstruct, AscentFromNoiseAndMonotoneBest) {
  std::mt19937_64 rng(17);
  const ImageRgb x = testing::synthetic_image(17, 16, 16);
  const ComponentParams p = params_around(rng, x);
  const ImageRgb init = perturb(x, rng, 0.1);
  const ReconstructResult r = reconstruct(p, init, {}, 100, 5e-3);
  ASSERT_EQ(r.scores.size(), 101u);
  ASSERT_EQ(r.best_so_far.size(), 101u);
  for (std::size_t k = 1; k < r.best_so_far.size(); ++k) {
    EXPECT_GE(r.best_so_far[k], r.best_so_far[k - 1]);
  }
  EXPECT_GT(r.best_score, r.scores.front());
  EXPECT_EQ(r.best_score, suss(p, r.image, {}).total);
  for (double v : r.image.data) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_THROW(reconstruct(p, init, {}, 5, 0.0), Error);
}

}  // namespace
}  // namespace suss
