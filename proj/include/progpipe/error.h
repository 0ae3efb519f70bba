/*
 * Copyright 2026 The progpipe Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PROGPIPE_ERROR_H_
#define PROGPIPE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace progpipe {

enum class ErrorCode {
  // Validation (bad arguments, specs, or configuration).
  kSpecInvalid,
  kEmptySpace,
  kBudgetExceedsGrid,
  kInvalidTaskGranularity,
  kInvalidArgument,
  kDimensionMismatch,
  kLengthMismatch,
  // Data problems.
  kIo,
  kHeaderMismatch,
  kRowArity,
  kLabelConflict,
  kEmptyJoin,
  kTooFewPatients,
  kEmptyCohort,
  kSchemaMismatch,
  kNonFinite,
  kDegenerateTarget,
  kSingleClass,
  kConstantTruth,
  kFoldFailure,
  // Anything else.
  kInternal,
};

std::string_view error_code_name(ErrorCode code);

// Process exit code for a failure of this kind: 2 validation, 3 data,
// 4 internal.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void check(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace progpipe

#endif  // PROGPIPE_ERROR_H_
