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

#include "suss/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "suss/error.hpp"

namespace suss {
namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

// Full-range BT.601 (JPEG) RGB -> YCbCr, without the chroma offset.
constexpr Mat3 kRgbToYcc = {{{0.299, 0.587, 0.114},
                             {-0.168736, -0.331264, 0.5},
                             {0.5, -0.418688, -0.081312}}};

// Linear sRGB -> CIE XYZ (D65).
constexpr Mat3 kRgbToXyz = {{{0.4124564, 0.3575761, 0.1804375},
                             {0.2126729, 0.7151522, 0.0721750},
                             {0.0193339, 0.1191920, 0.9503041}}};

Mat3 invert(const Mat3& m) {
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  Mat3 inv{};
  inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
  inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
  inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
  inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  return inv;
}

const Mat3& ycc_to_rgb_matrix() {
  static const Mat3 m = invert(kRgbToYcc);
  return m;
}

const Mat3& xyz_to_rgb_matrix() {
  static const Mat3 m = invert(kRgbToXyz);
  return m;
}

std::array<double, 3> apply(const Mat3& m, double a, double b, double c) {
  return {m[0][0] * a + m[0][1] * b + m[0][2] * c,
          m[1][0] * a + m[1][1] * b + m[1][2] * c,
          m[2][0] * a + m[2][1] * b + m[2][2] * c};
}

double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double l) {
  return l <= 0.0031308 ? 12.92 * l : 1.055 * std::pow(l, 1.0 / 2.4) - 0.055;
}

constexpr double kLabDelta = 6.0 / 29.0;

double lab_f(double t) {
  return t > kLabDelta * kLabDelta * kLabDelta
             ? std::cbrt(t)
             : t / (3.0 * kLabDelta * kLabDelta) + 4.0 / 29.0;
}

double lab_f_inv(double t) {
  return t > kLabDelta ? t * t * t
                       : 3.0 * kLabDelta * kLabDelta * (t - 4.0 / 29.0);
}

// Reference white is M * (1,1,1) so that sRGB white maps to a* = b* = 0.
std::array<double, 3> white_point() {
  return apply(kRgbToXyz, 1.0, 1.0, 1.0);
}

}  // namespace

const char* component_name(Component c) {
  switch (c) {
    case Component::kYFull: return "y_full";
    case Component::kYHalf: return "y_half";
    case Component::kYQuarter: return "y_quarter";
    case Component::kCbCrQuarter: return "cbcr_quarter";
  }
  return "unknown";
}

Component component_from_name(const std::string& name) {
  for (Component c : kComponents) {
    if (name == component_name(c)) return c;
  }
  throw_validation("unknown component '" + name + "'");
}

int component_scale(Component c) {
  switch (c) {
    case Component::kYFull: return 1;
    case Component::kYHalf: return 2;
    case Component::kYQuarter:
    case Component::kCbCrQuarter: return 4;
  }
  return 1;
}

YCbCrPlanes rgb_to_ycbcr(const ImageRgb& img) {
  YCbCrPlanes out{Plane(img.width, img.height, 1), Plane(img.width, img.height, 2)};
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ycc = apply(kRgbToYcc, img.data[3 * i], img.data[3 * i + 1],
                           img.data[3 * i + 2]);
    out.y.data[i] = ycc[0];
    out.cbcr.data[2 * i] = ycc[1] + 0.5;
    out.cbcr.data[2 * i + 1] = ycc[2] + 0.5;
  }
  return out;
}

ImageRgb ycbcr_to_rgb(const Plane& y, const Plane& cbcr) {
  if (y.channels != 1 || cbcr.channels != 2 || y.width != cbcr.width ||
      y.height != cbcr.height) {
    throw_shape("ycbcr_to_rgb: Y and CbCr planes disagree in shape");
  }
  ImageRgb out(y.width, y.height);
  const auto& m = ycc_to_rgb_matrix();
  for (std::size_t i = 0; i < y.pixels(); ++i) {
    const auto rgb =
        apply(m, y.data[i], cbcr.data[2 * i] - 0.5, cbcr.data[2 * i + 1] - 0.5);
    for (int c = 0; c < 3; ++c) out.data[3 * i + c] = rgb[c];
  }
  return out;
}

Plane rgb_to_lab(const ImageRgb& img) {
  Plane lab(img.width, img.height, 3);
  const auto white = white_point();
  for (std::size_t i = 0; i < lab.pixels(); ++i) {
    const auto xyz = apply(kRgbToXyz, srgb_to_linear(img.data[3 * i]),
                           srgb_to_linear(img.data[3 * i + 1]),
                           srgb_to_linear(img.data[3 * i + 2]));
    const double fx = lab_f(xyz[0] / white[0]);
    const double fy = lab_f(xyz[1] / white[1]);
    const double fz = lab_f(xyz[2] / white[2]);
    lab.data[3 * i] = 116.0 * fy - 16.0;
    lab.data[3 * i + 1] = 500.0 * (fx - fy);
    lab.data[3 * i + 2] = 200.0 * (fy - fz);
  }
  return lab;
}

ImageRgb lab_to_rgb(const Plane& lab) {
  if (lab.channels != 3) throw_shape("lab_to_rgb: expected a 3-channel plane");
  ImageRgb out(lab.width, lab.height);
  const auto white = white_point();
  const auto& m = xyz_to_rgb_matrix();
  for (std::size_t i = 0; i < lab.pixels(); ++i) {
    const double fy = (lab.data[3 * i] + 16.0) / 116.0;
    const double fx = fy + lab.data[3 * i + 1] / 500.0;
    const double fz = fy - lab.data[3 * i + 2] / 200.0;
    const auto rgb = apply(m, white[0] * lab_f_inv(fx), white[1] * lab_f_inv(fy),
                           white[2] * lab_f_inv(fz));
    for (int c = 0; c < 3; ++c) {
      out.data[3 * i + c] =
          std::clamp(linear_to_srgb(std::clamp(rgb[c], 0.0, 1.0)), 0.0, 1.0);
    }
  }
  return out;
}

Plane downsample2x(const Plane& p) {
  if (p.width % 2 != 0 || p.height % 2 != 0) {
    throw_shape("downsample2x: odd dimensions " + std::to_string(p.width) + "x" +
                std::to_string(p.height));
  }
  Plane out(p.width / 2, p.height / 2, p.channels);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      for (int c = 0; c < p.channels; ++c) {
        out.at(x, y, c) = 0.25 * (p.at(2 * x, 2 * y, c) + p.at(2 * x + 1, 2 * y, c) +
                                  p.at(2 * x, 2 * y + 1, c) +
                                  p.at(2 * x + 1, 2 * y + 1, c));
      }
    }
  }
  return out;
}

Plane downsample2x_adjoint(const Plane& p) {
  Plane out(p.width * 2, p.height * 2, p.channels);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      for (int c = 0; c < p.channels; ++c) {
        out.at(x, y, c) = 0.25 * p.at(x / 2, y / 2, c);
      }
    }
  }
  return out;
}

void check_decomposable(int width, int height) {
  if (width < 8 || height < 8 || width % 4 != 0 || height % 4 != 0) {
    throw_shape("image must be at least 8x8 with dimensions divisible by 4, got " +
                std::to_string(width) + "x" + std::to_string(height));
  }
}

ImageRgb center_crop_to_multiple(const ImageRgb& img, int multiple) {
  const int w = img.width - img.width % multiple;
  const int h = img.height - img.height % multiple;
  if (w == img.width && h == img.height) return img;
  const int x0 = (img.width - w) / 2;
  const int y0 = (img.height - h) / 2;
  ImageRgb out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(x + x0, y + y0, c);
    }
  }
  return out;
}

PerceptualDecomposition decompose(const ImageRgb& img) {
  check_decomposable(img.width, img.height);
  YCbCrPlanes ycc = rgb_to_ycbcr(img);
  PerceptualDecomposition d;
  d.y_half() = downsample2x(ycc.y);
  d.y_quarter() = downsample2x(d.y_half());
  d.y_full() = std::move(ycc.y);
  d.cbcr_quarter() = downsample2x(downsample2x(ycc.cbcr));
  return d;
}

PerceptualDecomposition zero_decomposition(int width, int height) {
  check_decomposable(width, height);
  PerceptualDecomposition d;
  d.y_full() = Plane(width, height, 1);
  d.y_half() = Plane(width / 2, height / 2, 1);
  d.y_quarter() = Plane(width / 4, height / 4, 1);
  d.cbcr_quarter() = Plane(width / 4, height / 4, 2);
  return d;
}

ImageRgb decompose_adjoint(const PerceptualDecomposition& grads, int width,
                           int height) {
  const PerceptualDecomposition expected = zero_decomposition(width, height);
  for (Component c : kComponents) {
    if (!grads[c].same_shape(expected[c])) {
      throw_shape(std::string("decompose_adjoint: component ") + component_name(c) +
                  " has the wrong shape");
    }
  }
  Plane gy = grads.y_full();
  const Plane from_half = downsample2x_adjoint(grads.y_half());
  const Plane from_quarter =
      downsample2x_adjoint(downsample2x_adjoint(grads.y_quarter()));
  for (std::size_t i = 0; i < gy.size(); ++i) {
    gy.data[i] += from_half.data[i] + from_quarter.data[i];
  }
  const Plane gcc = downsample2x_adjoint(downsample2x_adjoint(grads.cbcr_quarter()));

  ImageRgb out(width, height);
  for (std::size_t i = 0; i < gy.size(); ++i) {
    const double y = gy.data[i];
    const double cb = gcc.data[2 * i];
    const double cr = gcc.data[2 * i + 1];
    for (int c = 0; c < 3; ++c) {
      out.data[3 * i + c] =
          kRgbToYcc[0][c] * y + kRgbToYcc[1][c] * cb + kRgbToYcc[2][c] * cr;
    }
  }
  return out;
}

double dot(const Plane& a, const Plane& b) {
  if (!a.same_shape(b)) throw_shape("dot: plane shapes differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a.data[i] * b.data[i];
  return acc;
}

}  // namespace suss
