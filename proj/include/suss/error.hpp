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

#include <stdexcept>
#include <string>

namespace suss {

/// Coarse failure category. The CLI maps these onto exit codes.
enum class ErrorKind {
  kIo,          // unreadable / unwritable files, decode failures
  kShape,       // dimension or resolution mismatch
  kValidation,  // malformed config, manifest or container content
  kNumeric,     // non-finite values, degenerate statistics
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_io(const std::string& msg) {
  throw Error(ErrorKind::kIo, msg);
}
[[noreturn]] inline void throw_shape(const std::string& msg) {
  throw Error(ErrorKind::kShape, msg);
}
[[noreturn]] inline void throw_validation(const std::string& msg) {
  throw Error(ErrorKind::kValidation, msg);
}
[[noreturn]] inline void throw_numeric(const std::string& msg) {
  throw Error(ErrorKind::kNumeric, msg);
}

}  // namespace suss
