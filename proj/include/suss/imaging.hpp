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

// Image containers, color conversions and the four-component perceptual
// decomposition (Y at three scales plus quarter-scale CbCr) together with the
// exact transpose of its linear part.

#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace suss {

/// Row-major, channel-interleaved plane of doubles.
struct Plane {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<double> data;

  Plane() = default;
  Plane(int w, int h, int c, double fill = 0.0)
      : width(w), height(h), channels(c),
        data(static_cast<std::size_t>(w) * h * c, fill) {}

  std::size_t size() const { return data.size(); }
  std::size_t pixels() const { return static_cast<std::size_t>(width) * height; }

  double& at(int x, int y, int c = 0) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  double at(int x, int y, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  bool same_shape(const Plane& other) const {
    return width == other.width && height == other.height &&
           channels == other.channels;
  }
};

/// RGB image with interleaved channels. Values are nominally in [0,1]; only
/// save_image clips.
struct ImageRgb {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  ImageRgb() = default;
  ImageRgb(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, fill) {}

  double& at(int x, int y, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  double at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  bool same_shape(const ImageRgb& other) const {
    return width == other.width && height == other.height;
  }
};

/// Fixed component order used throughout the system.
enum class Component : int { kYFull = 0, kYHalf = 1, kYQuarter = 2, kCbCrQuarter = 3 };

inline constexpr int kNumComponents = 4;
inline constexpr std::array<Component, kNumComponents> kComponents = {
    Component::kYFull, Component::kYHalf, Component::kYQuarter,
    Component::kCbCrQuarter};

const char* component_name(Component c);
Component component_from_name(const std::string& name);
/// Downscaling factor of a component relative to the source image.
int component_scale(Component c);

struct PerceptualDecomposition {
  std::array<Plane, kNumComponents> planes;

  Plane& operator[](Component c) { return planes[static_cast<int>(c)]; }
  const Plane& operator[](Component c) const { return planes[static_cast<int>(c)]; }
  Plane& y_full() { return planes[0]; }
  Plane& y_half() { return planes[1]; }
  Plane& y_quarter() { return planes[2]; }
  Plane& cbcr_quarter() { return planes[3]; }
  const Plane& y_full() const { return planes[0]; }
  const Plane& y_half() const { return planes[1]; }
  const Plane& y_quarter() const { return planes[2]; }
  const Plane& cbcr_quarter() const { return planes[3]; }
};

struct YCbCrPlanes {
  Plane y;     // 1 channel
  Plane cbcr;  // 2 channels, interleaved (Cb, Cr)
};

/// Full-range BT.601 conversion, chroma offset 0.5.
YCbCrPlanes rgb_to_ycbcr(const ImageRgb& img);
ImageRgb ycbcr_to_rgb(const Plane& y, const Plane& cbcr);

/// sRGB (D65) to CIELAB; result has 3 channels (L*, a*, b*).
Plane rgb_to_lab(const ImageRgb& img);
/// Inverse of rgb_to_lab; out-of-gamut results are clipped to [0,1].
ImageRgb lab_to_rgb(const Plane& lab);

/// 2x2 average pooling per channel. Throws on odd dimensions.
Plane downsample2x(const Plane& p);
/// Transpose of downsample2x: replicates each value / 4 into a 2x2 block.
Plane downsample2x_adjoint(const Plane& p);

/// Throws kShape unless width, height >= 8 and both divisible by 4.
void check_decomposable(int width, int height);
/// Center-crops so both dimensions are multiples of `multiple`.
ImageRgb center_crop_to_multiple(const ImageRgb& img, int multiple);

PerceptualDecomposition decompose(const ImageRgb& img);

/// Transpose of the linear part of decompose (the chroma offset is dropped).
/// `grads` must be shaped like decompose() of a width x height image.
ImageRgb decompose_adjoint(const PerceptualDecomposition& grads, int width,
                           int height);

/// Shape of decompose() output for a width x height source, zero-filled.
PerceptualDecomposition zero_decomposition(int width, int height);

double dot(const Plane& a, const Plane& b);

}  // namespace suss
