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
#include <string>

#include "suss/error.hpp"
#include "suss/supn.hpp"

namespace suss {

NeighborhoodLayout offset_set(int window, int channels) {
  if (window < 1) throw_validation("offset_set: window must be >= 1");
  if (channels != 1 && channels != 2) {
    throw_validation("offset_set: channels must be 1 or 2");
  }
  NeighborhoodLayout layout;
  layout.window = window;
  layout.half_width = window / 2;
  layout.channels = channels;
  const int hw = layout.half_width;
  for (int dx = 1; dx <= hw; ++dx) layout.offsets.push_back({0, dx});
  for (int dy = 1; dy <= hw; ++dy) {
    for (int dx = -hw; dx <= hw; ++dx) layout.offsets.push_back({dy, dx});
  }
  return layout;
}

SupnParams SupnParams::zeros(const NeighborhoodLayout& layout, int width, int height) {
  if (width <= 0 || height <= 0) throw_shape("SupnParams: empty lattice");
  SupnParams p;
  p.layout = layout;
  p.width = width;
  p.height = height;
  p.mu = Plane(width, height, layout.channels);
  p.log_diag = Plane(width, height, layout.channels);
  p.off_diag.assign(layout.offsets.size(), Plane(width, height, layout.block()));
  if (layout.has_intra()) p.intra = Plane(width, height, 1);
  return p;
}

void SupnParams::check_consistent() const {
  const int c = layout.channels;
  auto expect = [&](const Plane& pl, int ch, const char* what) {
    if (pl.width != width || pl.height != height || pl.channels != ch ||
        pl.data.size() != static_cast<std::size_t>(width) * height * ch) {
      throw_shape(std::string("SupnParams: plane '") + what + "' has the wrong shape");
    }
  };
  expect(mu, c, "mu");
  expect(log_diag, c, "log_diag");
  if (off_diag.size() != layout.offsets.size()) {
    throw_shape("SupnParams: off_diag count does not match the offset set");
  }
  for (const Plane& p : off_diag) expect(p, layout.block(), "off_diag");
  if (layout.has_intra()) {
    expect(intra, 1, "intra");
  } else if (!intra.data.empty()) {
    throw_shape("SupnParams: intra-pixel plane on a 1-channel layout");
  }
}

void round_to_storage(SupnParams& params) {
  auto round = [](Plane& p) {
    for (double& v : p.data) v = static_cast<double>(static_cast<float>(v));
  };
  round(params.mu);
  round(params.log_diag);
  for (Plane& p : params.off_diag) round(p);
  round(params.intra);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed);
  h = mix(h ^ a);
  h = mix(h ^ b);
  h = mix(h ^ c);
  return h;
}

}  // namespace suss
