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

#include "suss/supn_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include <json.hpp>

#include "suss/error.hpp"

namespace suss {
namespace {

static_assert(std::endian::native == std::endian::little,
              "container IO assumes a little-endian host");

constexpr char kMagic[4] = {'S', 'U', 'P', 'N'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_plane(std::vector<std::uint8_t>& out, const Plane& p) {
  for (double v : p.data) {
    const float f = static_cast<float>(v);
    std::uint8_t b[4];
    std::memcpy(b, &f, 4);
    out.insert(out.end(), b, b + 4);
  }
}

std::vector<std::string> plane_order(const NeighborhoodLayout& layout) {
  std::vector<std::string> order = {"mu", "log_diag"};
  for (std::size_t k = 0; k < layout.offsets.size(); ++k) {
    order.push_back("off_diag[" + std::to_string(k) + "]");
  }
  if (layout.has_intra()) order.push_back("intra");
  return order;
}

}  // namespace

std::vector<std::uint8_t> encode_supn(const SupnParams& params) {
  params.check_consistent();
  nlohmann::json header;
  header["component_id"] = params.component_id;
  header["width"] = params.width;
  header["height"] = params.height;
  header["channels"] = params.channels();
  header["window"] = params.layout.window;
  nlohmann::json offsets = nlohmann::json::array();
  for (const Offset& o : params.layout.offsets) offsets.push_back({o.dy, o.dx});
  header["offsets"] = offsets;
  header["plane_order"] = plane_order(params.layout);
  const std::string text = header.dump();

  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  put_u32(out, kSupnVersion);
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
  put_plane(out, params.mu);
  put_plane(out, params.log_diag);
  for (const Plane& p : params.off_diag) put_plane(out, p);
  if (params.layout.has_intra()) put_plane(out, params.intra);
  return out;
}

SupnParams decode_supn(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 12) throw_validation("SUPN container truncated: missing preamble");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw_validation("SUPN container: bad magic bytes (expected \"SUPN\")");
  }
  const std::uint32_t version = get_u32(bytes.data() + 4);
  if (version != kSupnVersion) {
    throw_validation("SUPN container: unsupported version " + std::to_string(version));
  }
  const std::uint32_t header_len = get_u32(bytes.data() + 8);
  if (bytes.size() - 12 < header_len) {
    throw_validation("SUPN container truncated: header runs past end of file");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + 12, bytes.begin() + 12 + header_len);
  } catch (const nlohmann::json::exception& e) {
    throw_validation(std::string("SUPN container: malformed header: ") + e.what());
  }

  SupnParams params;
  try {
    const int width = header.at("width").get<int>();
    const int height = header.at("height").get<int>();
    const int channels = header.at("channels").get<int>();
    const int window = header.at("window").get<int>();
    if (width <= 0 || height <= 0) throw_validation("SUPN header: empty lattice");
    const NeighborhoodLayout layout = offset_set(window, channels);
    std::vector<Offset> declared;
    for (const auto& o : header.at("offsets")) declared.push_back({o.at(0), o.at(1)});
    if (declared != layout.offsets) {
      throw_validation("SUPN header: offset list does not match window " +
                       std::to_string(window));
    }
    if (header.at("plane_order").get<std::vector<std::string>>() != plane_order(layout)) {
      throw_validation("SUPN header: unexpected plane order");
    }
    params = SupnParams::zeros(layout, width, height);
    params.component_id = header.value("component_id", std::string());
  } catch (const nlohmann::json::exception& e) {
    throw_validation(std::string("SUPN header: ") + e.what());
  }

  const std::size_t payload = bytes.size() - 12 - header_len;
  if (payload % 4 != 0) throw_validation("SUPN container truncated: partial float32");
  std::size_t expected = params.mu.size() + params.log_diag.size() + params.intra.size();
  for (const Plane& p : params.off_diag) expected += p.size();
  if (payload / 4 != expected) {
    throw_validation("SUPN size mismatch: header declares " + std::to_string(expected) +
                     " float32 values, payload holds " + std::to_string(payload / 4));
  }
  const std::uint8_t* cursor = bytes.data() + 12 + header_len;
  auto read_plane = [&](Plane& p) {
    for (double& v : p.data) {
      float f;
      std::memcpy(&f, cursor, 4);
      cursor += 4;
      if (!std::isfinite(f)) throw_validation("SUPN payload: non-finite value");
      v = f;
    }
  };
  read_plane(params.mu);
  read_plane(params.log_diag);
  for (Plane& p : params.off_diag) read_plane(p);
  if (params.layout.has_intra()) read_plane(params.intra);
  return params;
}

void save_supn(const SupnParams& params, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = encode_supn(params);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_io("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw_io("write failed for '" + path.string() + "'");
}

SupnParams load_supn(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open '" + path.string() + "'");
  const std::vector<std::uint8_t> bytes(std::istreambuf_iterator<char>(in), {});
  return decode_supn(bytes);
}

}  // namespace suss
