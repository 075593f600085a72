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

#include "suss/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "suss/error.hpp"

namespace suss {
namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open '" + path.string() + "'");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

bool has_png_signature(const std::vector<std::uint8_t>& bytes) {
  static const std::uint8_t kSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  return bytes.size() >= 8 && std::memcmp(bytes.data(), kSig, 8) == 0;
}

ImageRgb decode_png(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw_io("PNG decode failed for '" + name + "': " + image.message);
  }
  if (image.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&image);
    throw_io("unsupported bit depth in '" + name + "': only 8-bit PNG is accepted");
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw_io("PNG decode failed for '" + name + "': " + msg);
  }
  ImageRgb img(static_cast<int>(image.width), static_cast<int>(image.height));
  for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = pixels[i] / 255.0;
  return img;
}

void write_png(const std::filesystem::path& path, int width, int height,
               std::uint32_t format, const std::vector<std::uint8_t>& bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, bytes.data(), 0,
                               nullptr)) {
    throw_io("cannot write PNG '" + path.string() + "': " + image.message);
  }
}

}  // namespace

std::uint8_t to_byte(double v) {
  const double clipped = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::floor(clipped * 255.0 + 0.5));
}

ImageRgb decode_ppm(const std::vector<std::uint8_t>& bytes) {
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&](const char* what) {
    skip_space();
    if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
      throw_io(std::string("PPM header: missing ") + what);
    }
    long v = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      v = v * 10 + (bytes[pos++] - '0');
      if (v > 1 << 24) throw_io(std::string("PPM header: ") + what + " too large");
    }
    return static_cast<int>(v);
  };

  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw_io("not a binary PPM (P6) file");
  }
  pos = 2;
  const int width = read_int("width");
  const int height = read_int("height");
  const int maxval = read_int("maxval");
  if (maxval != 255) {
    throw_io("unsupported bit depth: PPM maxval " + std::to_string(maxval));
  }
  if (width <= 0 || height <= 0) throw_io("PPM header: empty image");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw_io("PPM header: missing separator before raster");
  }
  ++pos;
  const std::size_t need = static_cast<std::size_t>(width) * height * 3;
  if (bytes.size() - pos < need) {
    throw_io("truncated PPM raster: expected " + std::to_string(need) +
             " bytes, found " + std::to_string(bytes.size() - pos));
  }
  ImageRgb img(width, height);
  for (std::size_t i = 0; i < need; ++i) img.data[i] = bytes[pos + i] / 255.0;
  return img;
}

ImageRgb load_image(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  if (has_png_signature(bytes)) return decode_png(bytes, path.string());
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
    try {
      return decode_ppm(bytes);
    } catch (const Error& e) {
      throw_io("'" + path.string() + "': " + e.what());
    }
  }
  throw_io("'" + path.string() + "' is neither PNG nor binary PPM");
}

void save_image(const ImageRgb& img, const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes(img.data.size());
  std::transform(img.data.begin(), img.data.end(), bytes.begin(), to_byte);
  if (path.extension() == ".ppm") {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_io("cannot write '" + path.string() + "'");
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw_io("write failed for '" + path.string() + "'");
    return;
  }
  write_png(path, img.width, img.height, PNG_FORMAT_RGB, bytes);
}

void save_gray_png(const Plane& plane, const std::filesystem::path& path) {
  if (plane.channels != 1) throw_shape("save_gray_png: expected a 1-channel plane");
  std::vector<std::uint8_t> bytes(plane.size());
  std::transform(plane.data.begin(), plane.data.end(), bytes.begin(), to_byte);
  write_png(path, plane.width, plane.height, PNG_FORMAT_GRAY, bytes);
}

}  // namespace suss
