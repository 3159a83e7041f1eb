// Copyright 2026 The Intersective Workbench Authors
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

#ifndef IWB_ERRORS_HPP
#define IWB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace iwb {

// Numeric values are mirrored by iwb_status in iwb.h; keep them in sync.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kDomain = 2,
  kPrecisionExhausted = 3,
  kDepthExhausted = 4,
  kNonIntegral = 5,
  kMissingRootData = 6,
  kCapExceeded = 7,
  kHypothesisViolation = 8,
  kGridTooSmall = 9,
  kInfeasible = 10,
  kConfig = 11,
  kIo = 12,
  kInternal = 13,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace iwb

#endif  // IWB_ERRORS_HPP
