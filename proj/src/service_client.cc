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

#include "repsumm/service_client.h"

#include <cmath>
#include <cstdlib>

#include "httplib.h"
#include "json.hpp"
#include "repsumm/error.h"

namespace repsumm {
namespace {

using nlohmann::json;

Error ProtocolViolation(std::string_view path, const std::string& why) {
  return Error(ErrorCode::kProtocolError, std::string(path) + ": " + why);
}

json ParseBody(std::string_view path, const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ProtocolViolation(path, "response is not a JSON object");
  }
  return j;
}

std::string StringField(std::string_view path, const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_string()) {
    throw ProtocolViolation(path, std::string("missing string field '") + field + "'");
  }
  return it->get<std::string>();
}

}  // namespace

std::string DefaultServiceUrl() {
  const char* env = std::getenv(std::string(kServiceUrlEnv).c_str());
  if (env != nullptr && *env != '\0') return env;
  return std::string(kDefaultServiceUrl);
}

ModelServiceClient::ModelServiceClient(std::string base_url, std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), timeout_(timeout) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

std::string ModelServiceClient::Request(std::string_view method, std::string_view path,
                                        const std::string& body) const {
  const std::string url = base_url_ + std::string(path);
  httplib::Client client(base_url_);
  if (!client.is_valid()) {
    throw Error(ErrorCode::kServiceUnavailable, url + ": invalid service URL");
  }
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  client.set_connection_timeout(std::chrono::seconds(5));
  client.set_read_timeout(secs);
  client.set_write_timeout(secs);

  httplib::Result res = method == "GET"
                            ? client.Get(std::string(path))
                            : client.Post(std::string(path), body, "application/json");
  if (!res) {
    throw Error(ErrorCode::kServiceUnavailable,
                url + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    std::string reason = res->body;
    json j = json::parse(res->body, nullptr, false);
    if (!j.is_discarded() && j.is_object() && j.contains("error") && j["error"].is_string()) {
      reason = j["error"].get<std::string>();
    }
    throw Error(ErrorCode::kServiceError,
                url + ": HTTP " + std::to_string(res->status) + " " + reason);
  }
  return res->body;
}

HealthStatus ModelServiceClient::Health() const {
  constexpr std::string_view kPath = "/v1/health";
  json j = ParseBody(kPath, Request("GET", kPath, ""));
  HealthStatus health;
  health.status = StringField(kPath, j, "status");
  if (!j.contains("models") || !j["models"].is_array()) {
    throw ProtocolViolation(kPath, "missing 'models' list");
  }
  for (const json& m : j["models"]) {
    ModelInfo info;
    if (m.is_string()) {
      info.name = m.get<std::string>();
    } else if (m.is_object()) {
      info.name = StringField(kPath, m, "name");
      if (m.contains("dim") && m["dim"].is_number_unsigned()) info.dim = m["dim"].get<size_t>();
    } else {
      throw ProtocolViolation(kPath, "model entry is neither string nor object");
    }
    health.models.push_back(std::move(info));
  }
  return health;
}

Embeddings ModelServiceClient::Embed(std::span<const std::string> texts) const {
  constexpr std::string_view kPath = "/v1/embed";
  Embeddings out;
  if (texts.empty()) return out;
  json request = {{"texts", json(std::vector<std::string>(texts.begin(), texts.end()))}};
  json j = ParseBody(kPath, Request("POST", kPath, request.dump()));
  out.model = StringField(kPath, j, "model");
  out.pooling = StringField(kPath, j, "pooling");
  if (!j.contains("dim") || !j["dim"].is_number_unsigned() || j["dim"].get<size_t>() == 0) {
    throw ProtocolViolation(kPath, "'dim' must be a positive integer");
  }
  out.dim = j["dim"].get<size_t>();
  if (!j.contains("vectors") || !j["vectors"].is_array() || j["vectors"].size() != texts.size()) {
    throw ProtocolViolation(kPath, "expected " + std::to_string(texts.size()) + " vectors");
  }
  for (const json& v : j["vectors"]) {
    if (!v.is_array() || v.size() != out.dim) {
      throw ProtocolViolation(kPath, "vector length differs from dim");
    }
    std::vector<double> dense;
    dense.reserve(out.dim);
    for (const json& x : v) {
      if (!x.is_number()) throw ProtocolViolation(kPath, "non-numeric vector component");
      dense.push_back(x.get<double>());
    }
    out.vectors.push_back(TermVector::FromDense(dense));
  }
  return out;
}

std::vector<double> ModelServiceClient::Score(std::span<const std::string> texts) const {
  constexpr std::string_view kPath = "/v1/score";
  if (texts.empty()) return {};
  json request = {{"texts", json(std::vector<std::string>(texts.begin(), texts.end()))}};
  json j = ParseBody(kPath, Request("POST", kPath, request.dump()));
  if (!j.contains("scores") || !j["scores"].is_array() || j["scores"].size() != texts.size()) {
    throw ProtocolViolation(kPath, "expected " + std::to_string(texts.size()) + " scores");
  }
  std::vector<double> scores;
  scores.reserve(texts.size());
  for (const json& s : j["scores"]) {
    if (!s.is_number()) throw ProtocolViolation(kPath, "non-numeric score");
    const double p = s.get<double>();
    if (!(p >= 0.0 && p <= 1.0)) throw ProtocolViolation(kPath, "score outside [0, 1]");
    scores.push_back(p);
  }
  return scores;
}

Generation ModelServiceClient::Generate(const std::string& input, int max_input_tokens,
                                        int max_new_tokens) const {
  constexpr std::string_view kPath = "/v1/generate";
  json request = {{"input", input},
                  {"max_input_tokens", max_input_tokens},
                  {"max_new_tokens", max_new_tokens}};
  json j = ParseBody(kPath, Request("POST", kPath, request.dump()));
  Generation gen;
  gen.model = StringField(kPath, j, "model");
  gen.output = StringField(kPath, j, "output");
  if (!j.contains("output_tokens") || !j["output_tokens"].is_number_integer()) {
    throw ProtocolViolation(kPath, "missing integer 'output_tokens'");
  }
  gen.output_tokens = j["output_tokens"].get<int>();
  if (gen.output_tokens > max_new_tokens) {
    throw Error(ErrorCode::kGenerationTooLong,
                base_url_ + std::string(kPath) + ": " + std::to_string(gen.output_tokens) +
                    " output tokens exceed max_new_tokens " + std::to_string(max_new_tokens));
  }
  return gen;
}

}  // namespace repsumm
