// Copyright 2026 The ssir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SSIR_ERROR_HPP_
#define SSIR_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ssir {

// Error classes map one-to-one onto CLI exit codes.
enum class ErrorCode : int {
  kInvalidArgument = 2,
  kIo = 3,
  kUnsupportedFormat = 4,
  kBadMagic = 5,
  kUnsupportedVersion = 6,
  kTruncated = 7,
  kShapeMismatch = 8,
  kNonFinite = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ssir

#endif  // SSIR_ERROR_HPP_
