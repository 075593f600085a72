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

#include <cmath>
#include <cstddef>
#include <vector>

#include "suss/supn_kernels.hpp"

namespace suss::kernels::parallel {
namespace {

// Valid x-range [lo, hi) for which px + dx stays inside [0, W).
inline void x_range(int W, int dx, int& lo, int& hi) {
  lo = dx < 0 ? -dx : 0;
  hi = dx > 0 ? W - dx : W;
}

// Each output is summed as: diagonal term, intra term, then offsets in layout
// order (and block entries in index order), matching the serial reference.
template <int C>
void whiten_rows(const SupnParams& params, const double* r, double* s) {
  const int W = params.width, H = params.height;
  const auto& offsets = params.layout.offsets;
  const int n_off = static_cast<int>(offsets.size());
  const double* d = params.log_diag.data.data();
  const double* t = C == 2 ? params.intra.data.data() : nullptr;

#pragma omp parallel for schedule(static)
  for (int py = 0; py < H; ++py) {
    double* srow = s + static_cast<std::size_t>(py) * W * C;
    const double* rrow = r + static_cast<std::size_t>(py) * W * C;
    const double* drow = d + static_cast<std::size_t>(py) * W * C;
    for (int k = 0; k < W * C; ++k) srow[k] = std::exp(drow[k]) * rrow[k];
    if constexpr (C == 2) {
      const double* trow = t + static_cast<std::size_t>(py) * W;
      for (int px = 0; px < W; ++px) srow[px * 2] += trow[px] * rrow[px * 2 + 1];
    }
    for (int o = 0; o < n_off; ++o) {
      const int ay = py + offsets[o].dy;
      if (ay >= H) continue;
      const int dx = offsets[o].dx;
      int lo, hi;
      x_range(W, dx, lo, hi);
      if (lo >= hi) continue;
      // Anchor pixel (px + dx, ay), first valid px = lo.
      const std::size_t first = static_cast<std::size_t>(ay) * W + (lo + dx);
      const double* ra = r + first * C;
      const double* blk = params.off_diag[o].data.data() + first * C * C;
      for (int k = 0; k < hi - lo; ++k) {
        const int px = lo + k;
        for (int b = 0; b < C; ++b) {
          double acc = srow[px * C + b];
          for (int a = 0; a < C; ++a) acc += blk[k * C * C + a * C + b] * ra[k * C + a];
          srow[px * C + b] = acc;
        }
      }
    }
  }
}

template <int C>
void apply_rows(const SupnParams& params, const double* s, double* v) {
  const int W = params.width, H = params.height;
  const auto& offsets = params.layout.offsets;
  const int n_off = static_cast<int>(offsets.size());
  const double* d = params.log_diag.data.data();
  const double* t = C == 2 ? params.intra.data.data() : nullptr;

#pragma omp parallel for schedule(static)
  for (int py = 0; py < H; ++py) {
    const std::size_t row = static_cast<std::size_t>(py) * W * C;
    double* vrow = v + row;
    const double* srow = s + row;
    const double* drow = d + row;
    for (int k = 0; k < W * C; ++k) vrow[k] = std::exp(drow[k]) * srow[k];
    if constexpr (C == 2) {
      const double* trow = t + static_cast<std::size_t>(py) * W;
      for (int px = 0; px < W; ++px) vrow[px * 2 + 1] += trow[px] * srow[px * 2];
    }
    for (int o = 0; o < n_off; ++o) {
      const int ny = py - offsets[o].dy;
      if (ny < 0) continue;
      const int dx = offsets[o].dx;
      int lo, hi;
      // Neighbor column px - dx must be inside [0, W).
      x_range(W, -dx, lo, hi);
      if (lo >= hi) continue;
      const double* sn = s + (static_cast<std::size_t>(ny) * W + (lo - dx)) * C;
      const double* blk = params.off_diag[o].data.data() + (row + lo * C) * C;
      for (int k = 0; k < hi - lo; ++k) {
        const int px = lo + k;
        for (int a = 0; a < C; ++a) {
          double acc = vrow[px * C + a];
          for (int b = 0; b < C; ++b) acc += blk[k * C * C + a * C + b] * sn[k * C + b];
          vrow[px * C + a] = acc;
        }
      }
    }
  }
}

template <int C>
void grad_rows(const SupnParams& params, const double* r, const double* s, const double* ls,
               double weight, SupnGradient& grad) {
  const int W = params.width, H = params.height;
  const auto& offsets = params.layout.offsets;
  const int n_off = static_cast<int>(offsets.size());
  const double* d = params.log_diag.data.data();

#pragma omp parallel for schedule(static)
  for (int py = 0; py < H; ++py) {
    const std::size_t row = static_cast<std::size_t>(py) * W * C;
    double* gmu = grad.mu.data.data() + row;
    double* gld = grad.log_diag.data.data() + row;
    for (int k = 0; k < W * C; ++k) {
      gmu[k] += weight * ls[row + k];
      gld[k] += weight * (1.0 - s[row + k] * r[row + k] * std::exp(d[row + k]));
    }
    if constexpr (C == 2) {
      double* gt = grad.intra.data.data() + static_cast<std::size_t>(py) * W;
      for (int px = 0; px < W; ++px) gt[px] -= weight * s[row + px * 2] * r[row + px * 2 + 1];
    }
    for (int o = 0; o < n_off; ++o) {
      const int ny = py - offsets[o].dy;
      if (ny < 0) continue;
      const int dx = offsets[o].dx;
      int lo, hi;
      x_range(W, -dx, lo, hi);
      if (lo >= hi) continue;
      const double* sn = s + (static_cast<std::size_t>(ny) * W + (lo - dx)) * C;
      const double* ri = r + row + lo * C;
      double* g = grad.off_diag[o].data.data() + (row + lo * C) * C;
      for (int k = 0; k < hi - lo; ++k) {
        for (int a = 0; a < C; ++a) {
          for (int b = 0; b < C; ++b) {
            g[k * C * C + a * C + b] -= weight * sn[k * C + b] * ri[k * C + a];
          }
        }
      }
    }
  }
}

}  // namespace

void whiten(const SupnParams& params, std::span<const double> r, std::span<double> s) {
  if (params.channels() == 1) {
    whiten_rows<1>(params, r.data(), s.data());
  } else {
    whiten_rows<2>(params, r.data(), s.data());
  }
}

void apply_factor(const SupnParams& params, std::span<const double> s,
                  std::span<double> v) {
  if (params.channels() == 1) {
    apply_rows<1>(params, s.data(), v.data());
  } else {
    apply_rows<2>(params, s.data(), v.data());
  }
}

void accumulate_param_grad(const SupnParams& params, std::span<const double> r,
                           std::span<const double> s, std::span<const double> ls,
                           double weight, SupnGradient& grad) {
  if (params.channels() == 1) {
    grad_rows<1>(params, r.data(), s.data(), ls.data(), weight, grad);
  } else {
    grad_rows<2>(params, r.data(), s.data(), ls.data(), weight, grad);
  }
}

double squared_norm(const SupnParams& params, std::span<const double> s) {
  const int H = params.height;
  const std::size_t row = static_cast<std::size_t>(params.width) * params.channels();
  std::vector<double> partial(H, 0.0);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < H; ++y) {
    double acc = 0.0;
    for (std::size_t k = y * row; k < (y + 1) * row; ++k) acc += s[k] * s[k];
    partial[y] = acc;
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace suss::kernels::parallel
