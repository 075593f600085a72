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

// Perceptually calibrated augmentations: five geometric families acting on
// pixel coordinates and four color families acting in CIELAB, each at five
// intensity levels (level 3 is the just-noticeable-difference band).

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "suss/imaging.hpp"

namespace suss {

enum class Family {
  kTranslation,
  kRotation,
  kScaling,
  kElastic,
  kPerspective,
  kBrightness,
  kContrast,
  kSaturation,
  kHue,
};

inline constexpr int kNumLevels = 5;
inline constexpr std::array<Family, 5> kGeometricFamilies = {
    Family::kTranslation, Family::kRotation, Family::kScaling, Family::kElastic,
    Family::kPerspective};
inline constexpr std::array<Family, 4> kColorFamilies = {
    Family::kBrightness, Family::kContrast, Family::kSaturation, Family::kHue};

const char* family_name(Family f);
Family family_from_name(const std::string& name);
bool is_geometric(Family f);

/// Closed range of the primary magnitude for a family and level.
///   translation  displacement as a fraction of image size
///   rotation     degrees
///   scaling      zoom factor (>= 1)
///   elastic      alpha (lo == hi); see elastic_sigma()
///   perspective  maximum corner jitter fraction d (lo == hi)
///   color        magnitude m of the CIELAB operator
struct LevelRange {
  double lo = 0.0;
  double hi = 0.0;
};
LevelRange level_range(Family f, int level);
double elastic_sigma(int level);

struct AugmentationSpec {
  Family family = Family::kTranslation;
  int level = 0;
  std::uint64_t seed = 0;
  double magnitude = 0.0;
  /// Translation: direction angle in radians. Every other family: +1 or -1.
  double direction = 1.0;
  /// Elastic only.
  double alpha = 0.0;
  double sigma = 0.0;
  /// Perspective only: per-corner (x, y) jitter as fractions of width/height,
  /// corners ordered top-left, top-right, bottom-right, bottom-left.
  std::array<double, 8> corners{};
};

AugmentationSpec sample_spec(Family family, int level, std::uint64_t seed);

ImageRgb apply_geometric(const ImageRgb& img, const AugmentationSpec& spec);
ImageRgb apply_color(const ImageRgb& img, const AugmentationSpec& spec);
ImageRgb apply_augmentation(const ImageRgb& img, const AugmentationSpec& spec);

/// Bilinear sample of channel c at continuous coordinates with reflect
/// padding (mirror without repeating the edge sample).
double sample_bilinear_reflect(const ImageRgb& img, double x, double y, int c);

struct PlanEntry {
  Family family = Family::kTranslation;
  std::vector<int> levels;
  int count = 1;
};

struct AugmentationPlan {
  std::vector<PlanEntry> entries;
  std::size_t size() const;
};

/// 5 geometric families x 5 levels (25 draws).
AugmentationPlan default_geometric_plan();
/// 4 color families x 5 levels (20 draws).
AugmentationPlan default_color_plan();

struct AugmentedImage {
  ImageRgb image;
  AugmentationSpec spec;
};

/// One transformed image per (entry, level, draw); draw k of (family, level)
/// uses seed derive_seed(seed, family, level, k).
std::vector<AugmentedImage> generate_batch(const ImageRgb& img,
                                           const AugmentationPlan& plan,
                                           std::uint64_t seed);

}  // namespace suss
