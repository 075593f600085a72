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

#include "suss/supn_kernels.hpp"

namespace suss::kernels {
namespace serial {

// Walks every stored entry L(i, j) once (row i = anchor, column j = neighbor)
// and scatters its contribution into column j: s_j += L_ij r_i.
void whiten(const SupnParams& params, std::span<const double> r, std::span<double> s) {
  const int W = params.width, H = params.height, C = params.channels();
  const double* d = params.log_diag.data.data();
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = std::exp(d[k]) * r[k];

  for (std::size_t o = 0; o < params.layout.offsets.size(); ++o) {
    const Offset off = params.layout.offsets[o];
    const double* blk = params.off_diag[o].data.data();
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        const int nx = x - off.dx, ny = y - off.dy;
        if (nx < 0 || nx >= W || ny < 0 || ny >= H) continue;
        const std::size_t i = static_cast<std::size_t>(y) * W + x;
        const std::size_t j = static_cast<std::size_t>(ny) * W + nx;
        for (int a = 0; a < C; ++a) {
          for (int b = 0; b < C; ++b) {
            s[j * C + b] += blk[i * C * C + a * C + b] * r[i * C + a];
          }
        }
      }
    }
  }
  if (params.layout.has_intra()) {
    const double* t = params.intra.data.data();
    for (std::size_t p = 0; p < params.intra.size(); ++p) s[2 * p] += t[p] * r[2 * p + 1];
  }
}

// Column-oriented product: every column j of L is pushed into the rows it
// reaches, v_i += L_ij s_j.
void apply_factor(const SupnParams& params, std::span<const double> s,
                  std::span<double> v) {
  const int W = params.width, H = params.height, C = params.channels();
  const double* d = params.log_diag.data.data();
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::exp(d[k]) * s[k];

  for (int ny = 0; ny < H; ++ny) {
    for (int nx = 0; nx < W; ++nx) {
      const std::size_t j = static_cast<std::size_t>(ny) * W + nx;
      for (std::size_t o = 0; o < params.layout.offsets.size(); ++o) {
        const Offset off = params.layout.offsets[o];
        const int x = nx + off.dx, y = ny + off.dy;
        if (x < 0 || x >= W || y < 0 || y >= H) continue;
        const std::size_t i = static_cast<std::size_t>(y) * W + x;
        const double* blk = params.off_diag[o].data.data() + i * C * C;
        for (int a = 0; a < C; ++a) {
          for (int b = 0; b < C; ++b) v[i * C + a] += blk[a * C + b] * s[j * C + b];
        }
      }
    }
  }
  if (params.layout.has_intra()) {
    const double* t = params.intra.data.data();
    for (std::size_t p = 0; p < params.intra.size(); ++p) v[2 * p + 1] += t[p] * s[2 * p];
  }
}

void accumulate_param_grad(const SupnParams& params, std::span<const double> r,
                           std::span<const double> s, std::span<const double> ls,
                           double weight, SupnGradient& grad) {
  const int W = params.width, H = params.height, C = params.channels();
  for (std::size_t k = 0; k < r.size(); ++k) {
    grad.mu.data[k] += weight * ls[k];
    const double dk = std::exp(params.log_diag.data[k]);
    grad.log_diag.data[k] += weight * (1.0 - s[k] * r[k] * dk);
  }
  for (std::size_t o = 0; o < params.layout.offsets.size(); ++o) {
    const Offset off = params.layout.offsets[o];
    double* g = grad.off_diag[o].data.data();
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        const int nx = x - off.dx, ny = y - off.dy;
        if (nx < 0 || nx >= W || ny < 0 || ny >= H) continue;
        const std::size_t i = static_cast<std::size_t>(y) * W + x;
        const std::size_t j = static_cast<std::size_t>(ny) * W + nx;
        for (int a = 0; a < C; ++a) {
          for (int b = 0; b < C; ++b) {
            g[i * C * C + a * C + b] -= weight * s[j * C + b] * r[i * C + a];
          }
        }
      }
    }
  }
  if (params.layout.has_intra()) {
    for (std::size_t p = 0; p < params.intra.size(); ++p) {
      grad.intra.data[p] -= weight * s[2 * p] * r[2 * p + 1];
    }
  }
}

}  // namespace serial

void solve_transposed(const SupnParams& params, std::span<const double> z,
                      std::span<double> x) {
  const int W = params.width, H = params.height, C = params.channels();
  const auto& offsets = params.layout.offsets;
  const double* d = params.log_diag.data.data();
  // Column j of L^T x = z reads rows i > j, which are already solved when
  // pixels go in reverse raster order and Cr precedes Cb inside a pixel.
  for (int py = H - 1; py >= 0; --py) {
    for (int px = W - 1; px >= 0; --px) {
      const std::size_t j = static_cast<std::size_t>(py) * W + px;
      for (int b = C - 1; b >= 0; --b) {
        double acc = z[j * C + b];
        for (std::size_t o = 0; o < offsets.size(); ++o) {
          const int ax = px + offsets[o].dx, ay = py + offsets[o].dy;
          if (ax < 0 || ax >= W || ay < 0 || ay >= H) continue;
          const std::size_t i = static_cast<std::size_t>(ay) * W + ax;
          const double* blk = params.off_diag[o].data.data() + i * C * C;
          for (int a = 0; a < C; ++a) acc -= blk[a * C + b] * x[i * C + a];
        }
        if (C == 2 && b == 0) acc -= params.intra.data[j] * x[j * C + 1];
        x[j * C + b] = acc / std::exp(d[j * C + b]);
      }
    }
  }
}

}  // namespace suss::kernels
