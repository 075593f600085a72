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

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "suss/imaging.hpp"

namespace suss {

/// Reads an 8-bit PNG (gray, RGB or RGBA; alpha dropped) or a binary P6 PPM.
/// Channel bytes map to v / 255.
ImageRgb load_image(const std::filesystem::path& path);

/// Writes PNG, or P6 PPM when the extension is .ppm. Values are clipped to
/// [0,1] and rounded half-up to bytes.
void save_image(const ImageRgb& img, const std::filesystem::path& path);

/// Writes a single-channel plane as 8-bit grayscale PNG (clipped to [0,1]).
void save_gray_png(const Plane& plane, const std::filesystem::path& path);

ImageRgb decode_ppm(const std::vector<std::uint8_t>& bytes);

std::uint8_t to_byte(double v);

}  // namespace suss
