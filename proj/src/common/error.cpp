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

#include "common/error.hpp"

namespace toxcl {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kFileMissing: return "file-missing";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kUnknownFormat: return "unknown-format";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kMalformedRow: return "malformed-row";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kInvalidDistribution: return "invalid-distribution";
    case ErrorCode::kEmptyClass: return "empty-class";
    case ErrorCode::kInsufficientData: return "insufficient-pairable-data";
    case ErrorCode::kMissingPrerequisite: return "missing-prerequisite";
    case ErrorCode::kCheckpointNotFound: return "checkpoint-not-found";
    case ErrorCode::kNotLoaded: return "bundle-not-loaded";
    case ErrorCode::kDecodeFailure: return "decode-failure";
    case ErrorCode::kTeacherMutated: return "teacher-mutated";
    case ErrorCode::kResource: return "resource";
    case ErrorCode::kLocked: return "locked";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> row)
    : std::runtime_error(message), code_(code), row_(row) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace toxcl
