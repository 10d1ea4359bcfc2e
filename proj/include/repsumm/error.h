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

#ifndef REPSUMM_ERROR_H_
#define REPSUMM_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace repsumm {

enum class ErrorCode {
  // Input validation.
  kMalformedLine,
  kSchemaViolation,
  kDuplicateId,
  kOrphanMonthlies,
  kDuplicateInvestment,
  kInconsistentFund,
  kBadRatios,
  kBadConfig,
  kEmptyCorpus,
  kDimMismatch,
  kEmptyInvestment,
  kEmptyTrainingSet,
  kDegenerateFeatures,
  kEmptyInput,
  kEmptyGroup,
  kMissingArtifact,
  kGroupFailures,
  // Environment: files and services.
  kIoError,
  kServiceUnavailable,
  kServiceError,
  kProtocolError,
  kGenerationTooLong,
};

std::string_view ErrorCodeName(ErrorCode code);

// True for failures caused by the environment (files, network, sidecar)
// rather than by the caller's input.
bool IsEnvironmentError(ErrorCode code);

// All library failures are reported as Error. The message is prefixed with
// the code name, e.g. "SchemaViolation: line 3: field 'asset_class'".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace repsumm

#endif  // REPSUMM_ERROR_H_
