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

#include "suss/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "suss/error.hpp"
#include "suss/stats.hpp"

namespace suss {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

struct CsvTable {
  std::map<std::string, std::size_t> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> row_numbers;  // 1-based data row numbers
};

CsvTable read_csv(const std::filesystem::path& path,
                  const std::vector<std::string>& required) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open manifest '" + path.string() + "'");
  CsvTable table;
  std::string line;
  bool have_header = false;
  int data_row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (!have_header) {
      for (std::size_t i = 0; i < fields.size(); ++i) table.columns[fields[i]] = i;
      for (const std::string& col : required) {
        if (!table.columns.count(col)) {
          throw_validation("manifest '" + path.string() + "': missing column '" + col + "'");
        }
      }
      have_header = true;
      continue;
    }
    ++data_row;
    fields.resize(std::max(fields.size(), table.columns.size()));
    table.rows.push_back(std::move(fields));
    table.row_numbers.push_back(data_row);
  }
  if (!have_header) throw_validation("manifest '" + path.string() + "' is empty");
  return table;
}

double parse_double(const std::string& text, const std::string& column, int row) {
  std::istringstream ss(text);
  double v = 0.0;
  ss >> v;
  if (text.empty() || ss.fail() || !ss.eof() || !std::isfinite(v)) {
    throw_validation("row " + std::to_string(row) + ": cannot parse " + column + " value '" +
                     text + "'");
  }
  return v;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

// Returns false when the row should be skipped (lenient mode).
bool check_files(const std::vector<std::filesystem::path>& paths, int row,
                 MissingFilePolicy policy) {
  for (const auto& p : paths) {
    if (!std::filesystem::exists(p)) {
      if (policy == MissingFilePolicy::kStrict) {
        throw_io("row " + std::to_string(row) + ": missing file '" + p.string() + "'");
      }
      return false;
    }
  }
  return true;
}

std::vector<double> minmax_normalize(std::vector<double> v, double lo, double hi) {
  for (double& x : v) x = (x - lo) / (hi - lo);
  return v;
}

Plane gaussian_window(double sigma, int size) {
  Plane w(size, 1, 1);
  const int r = size / 2;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    w.data[i] = std::exp(-0.5 * (i - r) * (i - r) / (sigma * sigma));
    sum += w.data[i];
  }
  for (double& v : w.data) v /= sum;
  return w;
}

int reflect(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

Plane blur(const Plane& p, const Plane& k) {
  const int r = k.width / 2;
  Plane tmp(p.width, p.height, 1), out(p.width, p.height, 1);
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k.data[i + r] * p.at(reflect(x + i, p.width), y);
      tmp.at(x, y) = acc;
    }
  }
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k.data[i + r] * tmp.at(x, reflect(y + i, p.height));
      out.at(x, y) = acc;
    }
  }
  return out;
}

Plane luminance(const ImageRgb& img) {
  Plane y(img.width, img.height, 1);
  for (std::size_t i = 0; i < y.size(); ++i) {
    y.data[i] = 0.299 * img.data[3 * i] + 0.587 * img.data[3 * i + 1] +
                0.114 * img.data[3 * i + 2];
  }
  return y;
}

}  // namespace

Manifest<TripletRecord> load_triplet_manifest(const std::filesystem::path& path,
                                              MissingFilePolicy policy) {
  const CsvTable t = read_csv(path, {"ref", "p0", "p1", "h"});
  const auto base = path.parent_path();
  Manifest<TripletRecord> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& f = t.rows[i];
    const int row = t.row_numbers[i];
    TripletRecord r;
    r.row = row;
    r.ref_path = resolve(base, f[t.columns.at("ref")]);
    r.p0_path = resolve(base, f[t.columns.at("p0")]);
    r.p1_path = resolve(base, f[t.columns.at("p1")]);
    r.h = parse_double(f[t.columns.at("h")], "h", row);
    if (r.h < 0.0 || r.h > 1.0) {
      throw_validation("row " + std::to_string(row) + ": h = " + f[t.columns.at("h")] +
                       " is outside [0,1]");
    }
    if (!check_files({r.ref_path, r.p0_path, r.p1_path}, row, policy)) {
      ++out.skipped;
      continue;
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

Manifest<MosRecord> load_mos_manifest(const std::filesystem::path& path,
                                      MissingFilePolicy policy) {
  const CsvTable t = read_csv(path, {"ref", "dist", "mos", "category"});
  const auto base = path.parent_path();
  const bool has_level = t.columns.count("level") > 0;
  Manifest<MosRecord> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& f = t.rows[i];
    const int row = t.row_numbers[i];
    MosRecord r;
    r.row = row;
    r.ref_path = resolve(base, f[t.columns.at("ref")]);
    r.dist_path = resolve(base, f[t.columns.at("dist")]);
    r.mos = parse_double(f[t.columns.at("mos")], "mos", row);
    r.category = f[t.columns.at("category")];
    if (has_level && !f[t.columns.at("level")].empty()) {
      const double lv = parse_double(f[t.columns.at("level")], "level", row);
      if (lv != std::floor(lv)) {
        throw_validation("row " + std::to_string(row) + ": level must be an integer");
      }
      r.distortion_level = static_cast<int>(lv);
    }
    if (!check_files({r.ref_path, r.dist_path}, row, policy)) {
      ++out.skipped;
      continue;
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

Choice choose(double similarity_p0, double similarity_p1) {
  if (similarity_p1 > similarity_p0) return Choice::kP1;
  if (similarity_p0 > similarity_p1) return Choice::kP0;
  return Choice::kTie;
}

double twoafc_score(std::span<const Choice> choices, std::span<const double> h) {
  if (choices.size() != h.size()) throw_shape("twoafc_score: length mismatch");
  if (choices.empty()) throw_validation("twoafc_score: no triplets");
  double acc = 0.0;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    switch (choices[i]) {
      case Choice::kP1: acc += h[i]; break;
      case Choice::kP0: acc += 1.0 - h[i]; break;
      case Choice::kTie: acc += 0.5; break;
    }
  }
  return acc / static_cast<double>(choices.size());
}

double twoafc_majority(std::span<const Choice> choices, std::span<const double> h) {
  if (choices.size() != h.size()) throw_shape("twoafc_majority: length mismatch");
  if (choices.empty()) throw_validation("twoafc_majority: no triplets");
  double acc = 0.0;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    if (choices[i] == Choice::kTie || h[i] == 0.5) {
      acc += 0.5;
    } else if ((choices[i] == Choice::kP1) == (h[i] > 0.5)) {
      acc += 1.0;
    }
  }
  return acc / static_cast<double>(choices.size());
}

std::vector<double> smoothed_histogram(std::span<const double> normalized_scores, int bins,
                                       double eps) {
  if (normalized_scores.empty()) throw_validation("histogram of an empty sample");
  std::vector<double> hist(bins, 0.0);
  for (double v : normalized_scores) {
    const int b = std::clamp(static_cast<int>(v * bins), 0, bins - 1);
    hist[b] += 1.0;
  }
  double total = 0.0;
  for (double& v : hist) {
    v = v / static_cast<double>(normalized_scores.size()) + eps;
    total += v;
  }
  for (double& v : hist) v /= total;
  return hist;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw_shape("kl_divergence: histogram sizes differ");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) kl += p[i] * std::log(p[i] / q[i]);
  }
  return kl;
}

std::map<std::string, double> kl_calibration(
    const std::map<std::string, std::vector<double>>& scores_by_category) {
  if (scores_by_category.size() < 2) {
    throw_validation("kl_calibration: needs at least 2 categories");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::vector<double> pooled;
  for (const auto& [name, scores] : scores_by_category) {
    if (scores.empty()) throw_validation("kl_calibration: category '" + name + "' is empty");
    for (double v : scores) {
      if (!std::isfinite(v)) throw_numeric("kl_calibration: non-finite score");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    pooled.insert(pooled.end(), scores.begin(), scores.end());
  }
  if (!(hi > lo)) throw_numeric("kl_calibration: all scores identical");
  const std::vector<double> aggregate = smoothed_histogram(minmax_normalize(pooled, lo, hi));
  std::map<std::string, double> out;
  for (const auto& [name, scores] : scores_by_category) {
    out[name] = kl_divergence(smoothed_histogram(minmax_normalize(scores, lo, hi)), aggregate);
  }
  return out;
}

double pairwise_kl(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw_validation("pairwise_kl: empty sample");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : a) lo = std::min(lo, v), hi = std::max(hi, v);
  for (double v : b) lo = std::min(lo, v), hi = std::max(hi, v);
  if (!(hi > lo)) return 0.0;  // both samples are the same point mass
  const std::vector<double> va(a.begin(), a.end()), vb(b.begin(), b.end());
  return kl_divergence(smoothed_histogram(minmax_normalize(va, lo, hi)),
                       smoothed_histogram(minmax_normalize(vb, lo, hi)));
}

double auc_separation(std::span<const double> high, std::span<const double> low) {
  if (high.empty() || low.empty()) throw_validation("auc_separation: empty group");
  std::vector<double> all(high.begin(), high.end());
  all.insert(all.end(), low.begin(), low.end());
  const std::vector<double> ranks = average_ranks(all);
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < high.size(); ++i) rank_sum += ranks[i];
  const double n1 = static_cast<double>(high.size()), n2 = static_cast<double>(low.size());
  return (rank_sum - n1 * (n1 + 1.0) / 2.0) / (n1 * n2);
}

double psnr(const ImageRgb& a, const ImageRgb& b) {
  if (!a.same_shape(b)) throw_shape("psnr: image shapes differ");
  double mse = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    mse += d * d;
  }
  mse /= static_cast<double>(a.data.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(mse);
}

double ssim_plane(const Plane& a, const Plane& b) {
  if (!a.same_shape(b) || a.channels != 1) throw_shape("ssim: plane shapes differ");
  constexpr double kC1 = 0.01 * 0.01, kC2 = 0.03 * 0.03;
  const Plane k = gaussian_window(1.5, 11);
  Plane aa(a.width, a.height, 1), bb(a.width, a.height, 1), ab(a.width, a.height, 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    aa.data[i] = a.data[i] * a.data[i];
    bb.data[i] = b.data[i] * b.data[i];
    ab.data[i] = a.data[i] * b.data[i];
  }
  const Plane mu_a = blur(a, k), mu_b = blur(b, k);
  const Plane s_aa = blur(aa, k), s_bb = blur(bb, k), s_ab = blur(ab, k);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ma = mu_a.data[i], mb = mu_b.data[i];
    const double va = s_aa.data[i] - ma * ma, vb = s_bb.data[i] - mb * mb;
    const double cov = s_ab.data[i] - ma * mb;
    acc += ((2.0 * ma * mb + kC1) * (2.0 * cov + kC2)) /
           ((ma * ma + mb * mb + kC1) * (va + vb + kC2));
  }
  return acc / static_cast<double>(a.size());
}

double ssim(const ImageRgb& a, const ImageRgb& b) {
  if (!a.same_shape(b)) throw_shape("ssim: image shapes differ");
  return ssim_plane(luminance(a), luminance(b));
}

}  // namespace suss
