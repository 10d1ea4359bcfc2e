// Copyright 2026 The repsumm Authors.
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

#include "repsumm/error.h"

namespace repsumm {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kOrphanMonthlies: return "OrphanMonthlies";
    case ErrorCode::kDuplicateInvestment: return "DuplicateInvestment";
    case ErrorCode::kInconsistentFund: return "InconsistentFund";
    case ErrorCode::kBadRatios: return "BadRatios";
    case ErrorCode::kBadConfig: return "BadConfig";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kEmptyInvestment: return "EmptyInvestment";
    case ErrorCode::kEmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::kDegenerateFeatures: return "DegenerateFeatures";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEmptyGroup: return "EmptyGroup";
    case ErrorCode::kMissingArtifact: return "MissingArtifact";
    case ErrorCode::kGroupFailures: return "GroupFailures";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kServiceUnavailable: return "ServiceUnavailable";
    case ErrorCode::kServiceError: return "ServiceError";
    case ErrorCode::kProtocolError: return "ProtocolError";
    case ErrorCode::kGenerationTooLong: return "GenerationTooLong";
  }
  return "Unknown";
}

bool IsEnvironmentError(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIoError:
    case ErrorCode::kServiceUnavailable:
    case ErrorCode::kServiceError:
    case ErrorCode::kProtocolError:
    case ErrorCode::kGenerationTooLong:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

}  // namespace repsumm
