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

// Dataset manifests and the evaluation statistics: 2AFC agreement,
// category-wise KL calibration, MOS-group AUC, and PSNR/SSIM baselines.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "suss/imaging.hpp"

namespace suss {

struct TripletRecord {
  std::filesystem::path ref_path;
  std::filesystem::path p0_path;
  std::filesystem::path p1_path;
  double h = 0.5;  // proportion of votes preferring p1
  int row = 0;     // 1-based data row in the manifest
};

struct MosRecord {
  std::filesystem::path ref_path;
  std::filesystem::path dist_path;
  double mos = 0.0;
  std::string category;
  std::optional<int> distortion_level;
  int row = 0;
};

enum class MissingFilePolicy { kStrict, kLenient };

template <typename Record>
struct Manifest {
  std::vector<Record> records;
  int skipped = 0;  // rows dropped in lenient mode because a file is missing
};

/// CSV `ref,p0,p1,h`. Relative paths resolve against the manifest directory.
Manifest<TripletRecord> load_triplet_manifest(const std::filesystem::path& path,
                                              MissingFilePolicy policy);
/// CSV `ref,dist,mos,category,level` (level may be empty).
Manifest<MosRecord> load_mos_manifest(const std::filesystem::path& path,
                                      MissingFilePolicy policy);

enum class Choice { kP0 = 0, kP1 = 1, kTie = 2 };

/// Picks the candidate with the higher similarity; exact ties give kTie.
Choice choose(double similarity_p0, double similarity_p1);

/// Vote-weighted 2AFC: h for choice p1, 1 - h for p0, 0.5 for a tie.
double twoafc_score(std::span<const Choice> choices, std::span<const double> h);
/// Hard-majority variant: agreement with round(h), h = 0.5 or ties count 0.5.
double twoafc_majority(std::span<const Choice> choices, std::span<const double> h);

inline constexpr int kKlBins = 50;
inline constexpr double kKlSmoothing = 1e-9;

/// Normalised histogram over [0,1] with additive smoothing.
std::vector<double> smoothed_histogram(std::span<const double> normalized_scores,
                                       int bins = kKlBins, double eps = kKlSmoothing);
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// KL(category || pooled) per category after joint min-max normalisation.
std::map<std::string, double> kl_calibration(
    const std::map<std::string, std::vector<double>>& scores_by_category);

/// KL(a || b) with the same binning, normalised jointly over a and b.
double pairwise_kl(std::span<const double> a, std::span<const double> b);

/// P(high > low) with ties counted 0.5.
double auc_separation(std::span<const double> high, std::span<const double> low);

/// PSNR with peak 1; identical inputs return +infinity.
double psnr(const ImageRgb& a, const ImageRgb& b);
/// Mean SSIM on BT.601 luminance: 11x11 Gaussian window (sigma 1.5) with
/// reflect padding, K1 = 0.01, K2 = 0.03, dynamic range 1.
double ssim(const ImageRgb& a, const ImageRgb& b);
double ssim_plane(const Plane& a, const Plane& b);

}  // namespace suss
