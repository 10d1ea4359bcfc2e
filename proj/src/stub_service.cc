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

#include "repsumm/stub_service.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "repsumm/fingerprint.h"
#include "repsumm/textproc.h"
#include "repsumm/utf8.h"

namespace repsumm {
namespace {

using nlohmann::json;

constexpr const char* kEmbedModel = "stub-embed";
constexpr const char* kScoreModel = "stub-scorer";
constexpr const char* kGenerateModel = "stub-generator";

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(-1, ' ', false, json::error_handler_t::replace), "application/json");
}

void ReplyError(httplib::Response& res, int status, const std::string& error) {
  Reply(res, status, json{{"error", error}});
}

std::vector<double> HashedBigrams(const std::string& text, size_t dim) {
  static const Tokenizer kBigrams = Tokenizer::CharNgram(2);
  std::vector<double> v(dim, 0.0);
  for (const std::string& term : kBigrams.Tokenize(text)) v[Fnv1a64(term) % dim] += 1.0;
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& x : v) x /= norm;
  }
  return v;
}

// Parses {"texts": [...]} and applies the shared validation rules. Returns
// false after writing the error response.
bool ParseTexts(const httplib::Request& req, httplib::Response& res, size_t max_bytes,
                std::vector<std::string>& texts) {
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("texts") || !j["texts"].is_array()) {
    ReplyError(res, 400, "BadRequest");
    return false;
  }
  for (const json& t : j["texts"]) {
    if (!t.is_string()) {
      ReplyError(res, 400, "BadRequest");
      return false;
    }
    texts.push_back(t.get<std::string>());
  }
  if (texts.empty()) {
    ReplyError(res, 400, "EmptyInput");
    return false;
  }
  for (const std::string& t : texts) {
    if (t.size() > max_bytes) {
      ReplyError(res, 413, "TooLarge");
      return false;
    }
  }
  return true;
}

}  // namespace

StubService::StubService(StubServiceOptions options)
    : options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
  Install();
  if (options_.port == 0) {
    port_ = server_->bind_to_any_port(options_.host);
  } else {
    port_ = server_->bind_to_port(options_.host, options_.port) ? options_.port : -1;
  }
  if (port_ <= 0) throw std::runtime_error("stub service: cannot bind " + options_.host);
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

StubService::~StubService() { Stop(); }

void StubService::Stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

void StubService::Wait() {
  if (thread_.joinable()) thread_.join();
}

std::string StubService::base_url() const {
  return "http://" + options_.host + ":" + std::to_string(port_);
}

std::string StubService::last_body(const std::string& path) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = last_bodies_.find(path);
  return it == last_bodies_.end() ? std::string() : it->second;
}

void StubService::Install() {
  auto record = [this](const httplib::Request& req) {
    ++requests_;
    std::lock_guard<std::mutex> lock(mu_);
    last_bodies_[req.path] = req.body;
  };

  server_->Get("/v1/health", [this, record](const httplib::Request& req, httplib::Response& res) {
    record(req);
    json models = json::array();
    if (options_.embed_loaded) models.push_back({{"name", kEmbedModel}, {"dim", options_.embed_dim}});
    if (options_.scorer_loaded) models.push_back({{"name", kScoreModel}});
    if (options_.generator_loaded) models.push_back({{"name", kGenerateModel}});
    const bool all = options_.embed_loaded && options_.scorer_loaded && options_.generator_loaded;
    Reply(res, 200, {{"status", all ? "ok" : "degraded"}, {"models", models}});
  });

  server_->Post("/v1/embed", [this, record](const httplib::Request& req, httplib::Response& res) {
    record(req);
    if (!options_.embed_loaded) return ReplyError(res, 503, "NoCheckpoint");
    std::vector<std::string> texts;
    if (!ParseTexts(req, res, options_.max_text_bytes, texts)) return;
    json vectors = json::array();
    for (const std::string& t : texts) vectors.push_back(HashedBigrams(t, options_.embed_dim));
    Reply(res, 200, {{"model", kEmbedModel}, {"pooling", "mean"},
                     {"dim", options_.embed_dim}, {"vectors", vectors}});
  });

  server_->Post("/v1/score", [this, record](const httplib::Request& req, httplib::Response& res) {
    record(req);
    if (!options_.scorer_loaded) return ReplyError(res, 503, "NoCheckpoint");
    std::vector<std::string> texts;
    if (!ParseTexts(req, res, options_.max_text_bytes, texts)) return;
    json scores = json::array();
    for (const std::string& t : texts) {
      const double z = (static_cast<double>(Fnv1a64(t) % 2001) - 1000.0) / 250.0;
      scores.push_back(1.0 / (1.0 + std::exp(-z)));
    }
    Reply(res, 200, {{"model", kScoreModel}, {"scores", scores}});
  });

  server_->Post("/v1/generate", [this, record](const httplib::Request& req, httplib::Response& res) {
    record(req);
    if (!options_.generator_loaded) return ReplyError(res, 503, "NoCheckpoint");
    json j = json::parse(req.body, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("input") || !j["input"].is_string()) {
      return ReplyError(res, 400, "BadRequest");
    }
    const std::string input = j["input"].get<std::string>();
    if (utf8::TrimSpace(input).empty()) return ReplyError(res, 400, "EmptyInput");
    const int max_input = j.value("max_input_tokens", 1024);
    const int max_new = j.value("max_new_tokens", 256);
    if (max_input < 1 || max_new < 1) return ReplyError(res, 400, "BadRequest");

    const std::vector<utf8::CodePoint> cps = utf8::Decode(input);
    const size_t kept = std::min({cps.size(), static_cast<size_t>(max_input),
                                  static_cast<size_t>(max_new)});
    const size_t end = kept == cps.size() ? input.size() : cps[kept].offset;
    const int tokens = options_.forced_output_tokens >= 0 ? options_.forced_output_tokens
                                                          : static_cast<int>(kept);
    Reply(res, 200, {{"model", kGenerateModel}, {"output", input.substr(0, end)},
                     {"output_tokens", tokens}});
  });
}

}  // namespace repsumm
