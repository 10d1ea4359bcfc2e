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

#ifndef REPSUMM_SERVICE_CLIENT_H_
#define REPSUMM_SERVICE_CLIENT_H_

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "repsumm/textproc.h"

namespace repsumm {

inline constexpr std::string_view kServiceUrlEnv = "REPSUMM_SERVICE_URL";
inline constexpr std::string_view kDefaultServiceUrl = "http://127.0.0.1:8000";

// $REPSUMM_SERVICE_URL when set and non-empty, kDefaultServiceUrl otherwise.
std::string DefaultServiceUrl();

struct ModelInfo {
  std::string name;
  std::optional<size_t> dim;
};

struct HealthStatus {
  std::string status;
  std::vector<ModelInfo> models;
};

struct Embeddings {
  std::string model;
  std::string pooling;
  size_t dim = 0;
  std::vector<TermVector> vectors;
};

struct Generation {
  std::string model;
  std::string output;
  int output_tokens = 0;
};

// Client for the sidecar inference service (/v1 JSON-over-HTTP protocol).
// Each call opens its own connection, so one client may be shared across
// threads. Failures:
//   ServiceUnavailable  connection refused or timed out (detail names the URL)
//   ServiceError        non-200 status (detail carries status and error body)
//   ProtocolError       response does not match the schema
class ModelServiceClient {
 public:
  explicit ModelServiceClient(std::string base_url,
                              std::chrono::milliseconds timeout = std::chrono::seconds(60));

  const std::string& base_url() const { return base_url_; }

  HealthStatus Health() const;

  // One vector per text; an empty request returns an empty result without
  // contacting the service.
  Embeddings Embed(std::span<const std::string> texts) const;

  // Probabilities in [0, 1], one per text, in request order.
  std::vector<double> Score(std::span<const std::string> texts) const;

  // Throws GenerationTooLong when the service reports more than
  // max_new_tokens output tokens.
  Generation Generate(const std::string& input, int max_input_tokens = 1024,
                      int max_new_tokens = 256) const;

 private:
  std::string Request(std::string_view method, std::string_view path,
                      const std::string& body) const;

  std::string base_url_;
  std::chrono::milliseconds timeout_;
};

}  // namespace repsumm

#endif  // REPSUMM_SERVICE_CLIENT_H_
