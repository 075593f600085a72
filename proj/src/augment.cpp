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

#include "suss/augment.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "suss/error.hpp"
#include "suss/supn.hpp"

namespace suss {
namespace {

struct TableRow {
  std::array<LevelRange, kNumLevels> levels;
};

// Magnitude ranges per level.
constexpr TableRow kTranslation = {{{{0.008, 0.01}, {0.01, 0.03}, {0.03, 0.05},
                                     {0.05, 0.07}, {0.07, 0.10}}}};
constexpr TableRow kRotation = {{{{0.01, 0.5}, {0.5, 1.4}, {1.4, 2.3}, {2.3, 3.2},
                                  {3.2, 4.2}}}};
constexpr TableRow kScaling = {{{{1.001, 1.005}, {1.005, 1.01}, {1.01, 1.02},
                                 {1.02, 1.03}, {1.03, 1.04}}}};
constexpr std::array<double, kNumLevels> kElasticAlpha = {1.0, 5.0, 10.0, 15.0, 20.0};
constexpr std::array<double, kNumLevels> kElasticSigma = {0.5, 1.0, 2.0, 3.0, 4.0};
constexpr std::array<double, kNumLevels> kPerspective = {0.05, 0.10, 0.15, 0.20, 0.25};
constexpr TableRow kBrightness = {{{{0.001, 0.002}, {0.002, 0.005}, {0.005, 0.008},
                                    {0.008, 0.015}, {0.015, 0.03}}}};
// Level 2 is (0.01, 0.015); the source table lists (0.001, 0.0015), which
// would sit below level 0 and break the severity ordering.
constexpr TableRow kContrast = {{{{0.002, 0.004}, {0.004, 0.008}, {0.01, 0.015},
                                  {0.015, 0.02}, {0.025, 0.035}}}};
constexpr TableRow kSaturation = {{{{0.0002, 0.0005}, {0.0005, 0.001}, {0.001, 0.015},
                                    {0.015, 0.02}, {0.025, 0.035}}}};
constexpr TableRow kHue = {{{{0.01, 0.02}, {0.02, 0.03}, {0.03, 0.04}, {0.04, 0.05},
                             {0.05, 0.06}}}};

void check_level(int level) {
  if (level < 0 || level >= kNumLevels) {
    throw_validation("augmentation level must be in 0..4, got " + std::to_string(level));
  }
}

int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

using CoordMap = std::function<void(double x, double y, double& sx, double& sy)>;

ImageRgb warp(const ImageRgb& img, const CoordMap& map) {
  ImageRgb out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double sx = 0.0, sy = 0.0;
      map(x, y, sx, sy);
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = sample_bilinear_reflect(img, sx, sy, c);
    }
  }
  return out;
}

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[i + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable Gaussian filter of a W x H scalar field, reflect boundary.
std::vector<double> gaussian_filter(const std::vector<double>& f, int W, int H,
                                    double sigma) {
  const std::vector<double> k = gaussian_kernel(sigma);
  const int radius = static_cast<int>(k.size() / 2);
  std::vector<double> tmp(f.size()), out(f.size());
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += k[i + radius] * f[static_cast<std::size_t>(y) * W + reflect_index(x + i, W)];
      }
      tmp[static_cast<std::size_t>(y) * W + x] = acc;
    }
  }
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += k[i + radius] *
               tmp[static_cast<std::size_t>(reflect_index(y + i, H)) * W + x];
      }
      out[static_cast<std::size_t>(y) * W + x] = acc;
    }
  }
  return out;
}

// Homography taking each dst corner to the matching src corner.
std::array<double, 9> fit_homography(const std::array<double, 8>& dst,
                                     const std::array<double, 8>& src) {
  Eigen::Matrix<double, 8, 8> A;
  Eigen::Matrix<double, 8, 1> b;
  for (int k = 0; k < 4; ++k) {
    const double x = dst[2 * k], y = dst[2 * k + 1];
    const double u = src[2 * k], v = src[2 * k + 1];
    A.row(2 * k) << x, y, 1, 0, 0, 0, -u * x, -u * y;
    A.row(2 * k + 1) << 0, 0, 0, x, y, 1, -v * x, -v * y;
    b(2 * k) = u;
    b(2 * k + 1) = v;
  }
  const Eigen::Matrix<double, 8, 1> h = A.colPivHouseholderQr().solve(b);
  return {h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), 1.0};
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::kTranslation: return "translation";
    case Family::kRotation: return "rotation";
    case Family::kScaling: return "scaling";
    case Family::kElastic: return "elastic";
    case Family::kPerspective: return "perspective";
    case Family::kBrightness: return "brightness";
    case Family::kContrast: return "contrast";
    case Family::kSaturation: return "saturation";
    case Family::kHue: return "hue";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  for (Family f : kGeometricFamilies) {
    if (name == family_name(f)) return f;
  }
  for (Family f : kColorFamilies) {
    if (name == family_name(f)) return f;
  }
  throw_validation("unknown augmentation family '" + name + "'");
}

bool is_geometric(Family f) {
  return std::find(kGeometricFamilies.begin(), kGeometricFamilies.end(), f) !=
         kGeometricFamilies.end();
}

LevelRange level_range(Family f, int level) {
  check_level(level);
  switch (f) {
    case Family::kTranslation: return kTranslation.levels[level];
    case Family::kRotation: return kRotation.levels[level];
    case Family::kScaling: return kScaling.levels[level];
    case Family::kElastic: return {kElasticAlpha[level], kElasticAlpha[level]};
    case Family::kPerspective: return {kPerspective[level], kPerspective[level]};
    case Family::kBrightness: return kBrightness.levels[level];
    case Family::kContrast: return kContrast.levels[level];
    case Family::kSaturation: return kSaturation.levels[level];
    case Family::kHue: return kHue.levels[level];
  }
  throw_validation("unknown augmentation family");
}

double elastic_sigma(int level) {
  check_level(level);
  return kElasticSigma[level];
}

AugmentationSpec sample_spec(Family family, int level, std::uint64_t seed) {
  const LevelRange range = level_range(family, level);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  AugmentationSpec spec;
  spec.family = family;
  spec.level = level;
  spec.seed = seed;
  spec.magnitude = range.lo + (range.hi - range.lo) * unit(rng);
  spec.direction = unit(rng) < 0.5 ? -1.0 : 1.0;
  switch (family) {
    case Family::kTranslation:
      spec.direction = 2.0 * std::numbers::pi * unit(rng);
      break;
    case Family::kElastic:
      spec.alpha = kElasticAlpha[level];
      spec.sigma = kElasticSigma[level];
      break;
    case Family::kPerspective:
      for (double& c : spec.corners) c = spec.magnitude * (2.0 * unit(rng) - 1.0);
      break;
    default:
      break;
  }
  return spec;
}

double sample_bilinear_reflect(const ImageRgb& img, double x, double y, int c) {
  const double fx = std::floor(x), fy = std::floor(y);
  const double tx = x - fx, ty = y - fy;
  const int x0 = static_cast<int>(fx), y0 = static_cast<int>(fy);
  const int xa = reflect_index(x0, img.width), xb = reflect_index(x0 + 1, img.width);
  const int ya = reflect_index(y0, img.height), yb = reflect_index(y0 + 1, img.height);
  const double top = (1.0 - tx) * img.at(xa, ya, c) + tx * img.at(xb, ya, c);
  const double bottom = (1.0 - tx) * img.at(xa, yb, c) + tx * img.at(xb, yb, c);
  return (1.0 - ty) * top + ty * bottom;
}

ImageRgb apply_geometric(const ImageRgb& img, const AugmentationSpec& spec) {
  const double W = img.width, H = img.height;
  const double cx = 0.5 * (W - 1.0), cy = 0.5 * (H - 1.0);
  switch (spec.family) {
    case Family::kTranslation: {
      const double tx = spec.magnitude * W * std::cos(spec.direction);
      const double ty = spec.magnitude * H * std::sin(spec.direction);
      return warp(img, [=](double x, double y, double& sx, double& sy) {
        sx = x - tx;
        sy = y - ty;
      });
    }
    case Family::kRotation: {
      const double theta = spec.direction * spec.magnitude * std::numbers::pi / 180.0;
      const double c = std::cos(theta), s = std::sin(theta);
      return warp(img, [=](double x, double y, double& sx, double& sy) {
        const double dx = x - cx, dy = y - cy;
        sx = cx + c * dx + s * dy;
        sy = cy - s * dx + c * dy;
      });
    }
    case Family::kScaling: {
      const double zoom = std::pow(spec.magnitude, spec.direction);
      return warp(img, [=](double x, double y, double& sx, double& sy) {
        sx = cx + (x - cx) / zoom;
        sy = cy + (y - cy) / zoom;
      });
    }
    case Family::kElastic: {
      const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
      std::mt19937_64 rng(derive_seed(spec.seed, 0xe1a5));
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      std::vector<double> fx(n), fy(n);
      for (double& v : fx) v = u(rng);
      for (double& v : fy) v = u(rng);
      fx = gaussian_filter(fx, img.width, img.height, spec.sigma);
      fy = gaussian_filter(fy, img.width, img.height, spec.sigma);
      const int w = img.width;
      const double alpha = spec.alpha;
      return warp(img, [&](double x, double y, double& sx, double& sy) {
        const std::size_t k = static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x);
        sx = x + alpha * fx[k];
        sy = y + alpha * fy[k];
      });
    }
    case Family::kPerspective: {
      const std::array<double, 8> dst = {0, 0, W - 1, 0, W - 1, H - 1, 0, H - 1};
      std::array<double, 8> src = dst;
      for (int k = 0; k < 4; ++k) {
        src[2 * k] += spec.corners[2 * k] * W;
        src[2 * k + 1] += spec.corners[2 * k + 1] * H;
      }
      const auto h = fit_homography(dst, src);
      return warp(img, [&](double x, double y, double& sx, double& sy) {
        const double z = h[6] * x + h[7] * y + h[8];
        sx = (h[0] * x + h[1] * y + h[2]) / z;
        sy = (h[3] * x + h[4] * y + h[5]) / z;
      });
    }
    default:
      throw_validation(std::string("apply_geometric: '") + family_name(spec.family) +
                       "' is not a geometric family");
  }
}

ImageRgb apply_color(const ImageRgb& img, const AugmentationSpec& spec) {
  if (is_geometric(spec.family)) {
    throw_validation(std::string("apply_color: '") + family_name(spec.family) +
                     "' is not a color family");
  }
  Plane lab = rgb_to_lab(img);
  const double m = spec.magnitude * spec.direction;
  const std::size_t n = lab.pixels();
  switch (spec.family) {
    case Family::kBrightness:
      for (std::size_t i = 0; i < n; ++i) lab.data[3 * i] += 100.0 * m;
      break;
    case Family::kContrast: {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += lab.data[3 * i];
      mean /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) {
        lab.data[3 * i] = mean + (1.0 + m) * (lab.data[3 * i] - mean);
      }
      break;
    }
    case Family::kSaturation:
      for (std::size_t i = 0; i < n; ++i) {
        lab.data[3 * i + 1] *= 1.0 + m;
        lab.data[3 * i + 2] *= 1.0 + m;
      }
      break;
    case Family::kHue: {
      const double c = std::cos(m), s = std::sin(m);
      for (std::size_t i = 0; i < n; ++i) {
        const double a = lab.data[3 * i + 1], b = lab.data[3 * i + 2];
        lab.data[3 * i + 1] = c * a - s * b;
        lab.data[3 * i + 2] = s * a + c * b;
      }
      break;
    }
    default:
      break;
  }
  return lab_to_rgb(lab);
}

ImageRgb apply_augmentation(const ImageRgb& img, const AugmentationSpec& spec) {
  return is_geometric(spec.family) ? apply_geometric(img, spec) : apply_color(img, spec);
}

std::size_t AugmentationPlan::size() const {
  std::size_t n = 0;
  for (const PlanEntry& e : entries) n += e.levels.size() * static_cast<std::size_t>(e.count);
  return n;
}

AugmentationPlan default_geometric_plan() {
  AugmentationPlan plan;
  for (Family f : kGeometricFamilies) plan.entries.push_back({f, {0, 1, 2, 3, 4}, 1});
  return plan;
}

AugmentationPlan default_color_plan() {
  AugmentationPlan plan;
  for (Family f : kColorFamilies) plan.entries.push_back({f, {0, 1, 2, 3, 4}, 1});
  return plan;
}

std::vector<AugmentedImage> generate_batch(const ImageRgb& img,
                                           const AugmentationPlan& plan,
                                           std::uint64_t seed) {
  std::vector<AugmentationSpec> specs;
  for (const PlanEntry& e : plan.entries) {
    if (e.count < 1) throw_validation("augmentation plan entry count must be >= 1");
    for (int level : e.levels) {
      for (int k = 0; k < e.count; ++k) {
        specs.push_back(sample_spec(
            e.family, level,
            derive_seed(seed, static_cast<std::uint64_t>(e.family) + 1, level, k)));
      }
    }
  }
  std::vector<AugmentedImage> out(specs.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(specs.size()); ++i) {
    out[i] = {apply_augmentation(img, specs[i]), specs[i]};
  }
  return out;
}

}  // namespace suss
