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

#include "suss/augment.hpp"
#include "suss/error.hpp"
#include "suss/supn.hpp"
#include "test_support.hpp"

namespace suss {
namespace {

const std::array<Family, 9> kAllFamilies = {
    Family::kTranslation, Family::kRotation,   Family::kScaling,
    Family::kElastic,     Family::kPerspective, Family::kBrightness,
    Family::kContrast,    Family::kSaturation, Family::kHue};

double rms_diff(const ImageRgb& a, const ImageRgb& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.data.size(); ++k) {
    const double d = a.data[k] - b.data[k];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(a.data.size()));
}

TEST(Augment, FamilyNames) {
  for (Family f : kAllFamilies) EXPECT_EQ(family_from_name(family_name(f)), f);
  EXPECT_THROW(family_from_name("blur"), Error);
  EXPECT_THROW(sample_spec(Family::kHue, 5, 1), Error);
  EXPECT_THROW(sample_spec(Family::kHue, -1, 1), Error);
}

TEST(Augment, TableExamples) {
  EXPECT_DOUBLE_EQ(level_range(Family::kRotation, 3).lo, 2.3);
  EXPECT_DOUBLE_EQ(level_range(Family::kRotation, 3).hi, 3.2);
  EXPECT_DOUBLE_EQ(level_range(Family::kTranslation, 3).lo, 0.05);
  EXPECT_DOUBLE_EQ(level_range(Family::kTranslation, 3).hi, 0.07);
  EXPECT_DOUBLE_EQ(level_range(Family::kBrightness, 0).lo, 0.001);
  EXPECT_DOUBLE_EQ(level_range(Family::kBrightness, 0).hi, 0.002);
  EXPECT_DOUBLE_EQ(level_range(Family::kHue, 3).lo, 0.04);
  EXPECT_DOUBLE_EQ(level_range(Family::kHue, 3).hi, 0.05);
  const AugmentationSpec e = sample_spec(Family::kElastic, 3, 9);
  EXPECT_DOUBLE_EQ(e.alpha, 15.0);
  EXPECT_DOUBLE_EQ(e.sigma, 3.0);
}

TEST(Augment, SampledParametersWithinRangeOver10kDraws) {
  for (Family f : kAllFamilies) {
    for (int level = 0; level < kNumLevels; ++level) {
      const LevelRange r = level_range(f, level);
      for (int k = 0; k < 10000; ++k) {
        const AugmentationSpec s = sample_spec(f, level, derive_seed(77, level, k));
        ASSERT_GE(s.magnitude, r.lo);
        ASSERT_LE(s.magnitude, r.hi);
        if (f == Family::kTranslation) {
          ASSERT_GE(s.direction, 0.0);
          ASSERT_LT(s.direction, 2.0 * std::numbers::pi);
        } else {
          ASSERT_TRUE(s.direction == 1.0 || s.direction == -1.0);
        }
        if (f == Family::kPerspective) {
          for (double c : s.corners) ASSERT_LE(std::abs(c), s.magnitude);
        }
      }
    }
  }
}

TEST(Augment, BothSignsDrawn) {
  int positive = 0;
  for (int k = 0; k < 1000; ++k) positive += sample_spec(Family::kRotation, 2, k).direction > 0;
  EXPECT_GT(positive, 400);
  EXPECT_LT(positive, 600);
}

TEST(Augment, ConstantImageInvariantUnderGeometry) {
  const ImageRgb flat(24, 16, 0.37);
  for (Family f : kGeometricFamilies) {
    for (int level = 0; level < kNumLevels; ++level) {
      const ImageRgb out = apply_geometric(flat, sample_spec(f, level, 100 + level));
      EXPECT_LT(testing::max_abs_diff(out, flat), 1e-6) << family_name(f) << level;
    }
  }
}

TEST(Augment, IntegerTranslationIsReflectedShift) {
  const ImageRgb img = testing::synthetic_image(3, 20, 12);
  AugmentationSpec spec;
  spec.family = Family::kTranslation;
  spec.magnitude = 3.0 / 20.0;
  spec.direction = 0.0;
  const ImageRgb out = apply_geometric(img, spec);
  auto reflect = [](int i, int n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
    return i;
  };
  for (int y = 0; y < 12; ++y) {
    for (int x = 0; x < 20; ++x) {
      for (int c = 0; c < 3; ++c) {
        EXPECT_NEAR(out.at(x, y, c), img.at(reflect(x - 3, 20), y, c), 1e-12);
      }
    }
  }

  spec.magnitude = 2.0 / 12.0;
  spec.direction = 0.5 * std::numbers::pi;
  const ImageRgb down = apply_geometric(img, spec);
  for (int y = 0; y < 12; ++y) {
    for (int x = 0; x < 20; ++x) {
      EXPECT_NEAR(down.at(x, y, 1), img.at(x, reflect(y - 2, 12), 1), 1e-12);
    }
  }
}

TEST(Augment, ReflectPaddingDoesNotRepeatEdge) {
  ImageRgb img(4, 1);
  for (int x = 0; x < 4; ++x) img.at(x, 0, 0) = x;
  EXPECT_DOUBLE_EQ(sample_bilinear_reflect(img, -1.0, 0.0, 0), 1.0);
  EXPECT_DOUBLE_EQ(sample_bilinear_reflect(img, 4.0, 0.0, 0), 2.0);
  EXPECT_DOUBLE_EQ(sample_bilinear_reflect(img, 1.5, 0.0, 0), 1.5);
}

TEST(Augment, RotationSmallAngleMovesOffCenterPixels) {
  const ImageRgb img = testing::synthetic_image(5, 32, 32);
  AugmentationSpec spec = sample_spec(Family::kRotation, 4, 1);
  const ImageRgb out = apply_geometric(img, spec);
  EXPECT_GT(rms_diff(out, img), 1e-3);
  spec.magnitude = 0.0;
  EXPECT_LT(testing::max_abs_diff(apply_geometric(img, spec), img), 1e-12);
}

TEST(Augment, HueZeroIsIdentity) {
  const ImageRgb img = testing::synthetic_image(8, 16, 16);
  AugmentationSpec spec;
  spec.family = Family::kHue;
  spec.magnitude = 0.0;
  EXPECT_LT(testing::max_abs_diff(apply_color(img, spec), img), 1e-9);
}

TEST(Augment, AchromaticFixedPoint) {
  ImageRgb gray(8, 8);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      for (int c = 0; c < 3; ++c) gray.at(x, y, c) = (x + 8 * y) / 64.0;
    }
  }
  for (Family f : {Family::kSaturation, Family::kHue}) {
    for (int level = 0; level < kNumLevels; ++level) {
      const ImageRgb out = apply_color(gray, sample_spec(f, level, level));
      EXPECT_LT(testing::max_abs_diff(out, gray), 1e-6);
    }
  }
}

TEST(Augment, ColorOperatorsActOnLab) {
  const ImageRgb img(8, 8, 0.5);
  AugmentationSpec spec;
  spec.family = Family::kBrightness;
  spec.magnitude = 0.01;
  spec.direction = 1.0;
  const Plane before = rgb_to_lab(img);
  const Plane after = rgb_to_lab(apply_color(img, spec));
  EXPECT_NEAR(after.data[0] - before.data[0], 1.0, 1e-6);
}

TEST(Augment, FamilyKindMismatchThrows) {
  const ImageRgb img(8, 8, 0.5);
  EXPECT_THROW(apply_geometric(img, sample_spec(Family::kHue, 1, 1)), Error);
  EXPECT_THROW(apply_color(img, sample_spec(Family::kRotation, 1, 1)), Error);
}

TEST(Augment, DefaultPlansAndDeterminism) {
  const ImageRgb img = testing::synthetic_image(2, 16, 16);
  const auto geo = generate_batch(img, default_geometric_plan(), 5);
  ASSERT_EQ(geo.size(), 25u);
  std::array<std::array<int, 5>, 5> seen{};
  for (const AugmentedImage& a : geo) {
    ASSERT_TRUE(is_geometric(a.spec.family));
    ++seen[static_cast<int>(a.spec.family)][a.spec.level];
  }
  for (const auto& row : seen) {
    for (int v : row) EXPECT_EQ(v, 1);
  }
  const auto color = generate_batch(img, default_color_plan(), 5);
  ASSERT_EQ(color.size(), 20u);
  for (const AugmentedImage& a : color) EXPECT_FALSE(is_geometric(a.spec.family));

  const auto again = generate_batch(img, default_geometric_plan(), 5);
  for (std::size_t k = 0; k < geo.size(); ++k) EXPECT_EQ(geo[k].image.data, again[k].image.data);
  const auto other = generate_batch(img, default_geometric_plan(), 6);
  EXPECT_NE(geo[0].image.data, other[0].image.data);
}

TEST(Augment, PlanCounts) {
  AugmentationPlan plan;
  plan.entries.push_back({Family::kRotation, {3}, 4});
  plan.entries.push_back({Family::kHue, {0, 4}, 2});
  EXPECT_EQ(plan.size(), 8u);
  const auto out = generate_batch(ImageRgb(8, 8, 0.2), plan, 1);
  EXPECT_EQ(out.size(), 8u);
  EXPECT_NE(out[0].spec.seed, out[1].spec.seed);
  plan.entries[0].count = 0;
  EXPECT_THROW(generate_batch(ImageRgb(8, 8, 0.2), plan, 1), Error);
}

// Mean RMS change from the source over 100 seeds, non-decreasing in level
// (ties within 5% relative).
TEST(Augment, MonotoneSeverity) {
  const ImageRgb img = testing::synthetic_image(11, 32, 32);
  for (Family f : kAllFamilies) {
    std::array<double, kNumLevels> mean{};
    for (int level = 0; level < kNumLevels; ++level) {
      for (int k = 0; k < 100; ++k) {
        const AugmentationSpec s = sample_spec(f, level, derive_seed(3, level, k));
        mean[level] += rms_diff(apply_augmentation(img, s), img) / 100.0;
      }
    }
    for (int level = 1; level < kNumLevels; ++level) {
      EXPECT_GE(mean[level], 0.95 * mean[level - 1])
          << family_name(f) << " level " << level << ": " << mean[level] << " vs "
          << mean[level - 1];
    }
  }
}

}  // namespace
}  // namespace suss
