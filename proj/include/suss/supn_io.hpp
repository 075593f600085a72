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

// SUPN container:
//   "SUPN" | u32 LE version (=1) | u32 LE header length | UTF-8 JSON header |
//   float32 LE planes in header order: mu, log_diag, off_diag[0..K), intra.

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "suss/supn.hpp"

namespace suss {

inline constexpr std::uint32_t kSupnVersion = 1;

std::vector<std::uint8_t> encode_supn(const SupnParams& params);
SupnParams decode_supn(const std::vector<std::uint8_t>& bytes);

void save_supn(const SupnParams& params, const std::filesystem::path& path);
SupnParams load_supn(const std::filesystem::path& path);

}  // namespace suss
