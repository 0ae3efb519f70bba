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

#include "progpipe/error.h"

namespace progpipe {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSpecInvalid: return "SpecInvalid";
    case ErrorCode::kEmptySpace: return "EmptySpace";
    case ErrorCode::kBudgetExceedsGrid: return "BudgetExceedsGrid";
    case ErrorCode::kInvalidTaskGranularity: return "InvalidTaskGranularity";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kHeaderMismatch: return "HeaderMismatch";
    case ErrorCode::kRowArity: return "RowArity";
    case ErrorCode::kLabelConflict: return "LabelConflict";
    case ErrorCode::kEmptyJoin: return "EmptyJoin";
    case ErrorCode::kTooFewPatients: return "TooFewPatients";
    case ErrorCode::kEmptyCohort: return "EmptyCohort";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kDegenerateTarget: return "DegenerateTarget";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kConstantTruth: return "ConstantTruth";
    case ErrorCode::kFoldFailure: return "FoldFailure";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSpecInvalid:
    case ErrorCode::kEmptySpace:
    case ErrorCode::kBudgetExceedsGrid:
    case ErrorCode::kInvalidTaskGranularity:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kLengthMismatch:
      return 2;
    case ErrorCode::kInternal:
      return 4;
    default:
      return 3;
  }
}

}  // namespace progpipe
