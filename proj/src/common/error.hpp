// Copyright 2026 The ToXCL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TOXCL_COMMON_ERROR_HPP_
#define TOXCL_COMMON_ERROR_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace toxcl {

enum class ErrorCode {
  kInvalidArgument,
  kFileMissing,
  kIo,
  kUnknownFormat,
  kParse,
  kMalformedRow,
  kPrecondition,
  kLengthMismatch,
  kEmptyInput,
  kInvalidDistribution,
  kEmptyClass,
  kInsufficientData,
  kMissingPrerequisite,
  kCheckpointNotFound,
  kNotLoaded,
  kDecodeFailure,
  kTeacherMutated,
  kResource,
  kLocked,
  kInternal,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. Row-level ingest failures carry the
// 1-based row number of the offending record.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> row = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> row() const noexcept { return row_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> row_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace toxcl

#endif  // TOXCL_COMMON_ERROR_HPP_
