// Copyright 2026 The PBACC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PBACC_ERRORS_HPP_
#define PBACC_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace pbacc {

enum class ErrorCode {
  kInvalidArgument,
  kGridCollision,
  kInvalidShift,
  kInsufficientResults,
  kDegenerateWeight,
  kNumericalFailure,
  kCapacity,
  kIncompleteAssembly,
  kConfig,
};

// Library failure with a machine-readable category.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kGridCollision:
      return "grid-collision";
    case ErrorCode::kInvalidShift:
      return "invalid-shift";
    case ErrorCode::kInsufficientResults:
      return "insufficient-results";
    case ErrorCode::kDegenerateWeight:
      return "degenerate-weight";
    case ErrorCode::kNumericalFailure:
      return "numerical-failure";
    case ErrorCode::kCapacity:
      return "capacity";
    case ErrorCode::kIncompleteAssembly:
      return "incomplete-assembly";
    case ErrorCode::kConfig:
      return "config";
  }
  return "unknown";
}

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(ErrorCodeName(code)) + ": " + what);
}

}  // namespace pbacc

#endif  // PBACC_ERRORS_HPP_
