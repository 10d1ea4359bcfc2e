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

#include <cstdlib>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "repsumm/service_client.h"
#include "repsumm/stub_service.h"
#include "test_support.h"

namespace repsumm {
namespace {

using Strings = std::vector<std::string>;

TEST_CASE("health reports loaded models") {
  StubService stub;
  const HealthStatus health = ModelServiceClient(stub.base_url()).Health();
  CHECK(health.status == "ok");
  REQUIRE(health.models.size() == 3);
  CHECK(health.models[0].dim == 64u);

  StubServiceOptions none;
  none.embed_loaded = none.scorer_loaded = none.generator_loaded = false;
  StubService empty(none);
  const HealthStatus degraded = ModelServiceClient(empty.base_url()).Health();
  CHECK(degraded.status == "degraded");
  CHECK(degraded.models.empty());
}

TEST_CASE("embeddings have one fixed-dimension vector per text") {
  StubService stub;
  ModelServiceClient client(stub.base_url());
  const Strings texts = {"金利が低下", "株価", "金利が低下"};
  const Embeddings e = client.Embed(texts);
  CHECK(e.dim == 64);
  CHECK(e.pooling == "mean");
  REQUIRE(e.vectors.size() == 3);
  for (const TermVector& v : e.vectors) CHECK(v.dim == 64);
  CHECK(Cosine(e.vectors[0], e.vectors[2]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.vectors[0].entries == e.vectors[2].entries);
  const size_t before = stub.request_count();
  CHECK(client.Embed(Strings{}).vectors.empty());
  CHECK(stub.request_count() == before);
}

TEST_CASE("unreachable service is ServiceUnavailable naming the URL") {
  int port = 0;
  {
    StubService stub;
    port = stub.port();
  }
  const std::string url = "http://127.0.0.1:" + std::to_string(port);
  ModelServiceClient client(url, std::chrono::milliseconds(500));
  try {
    client.Health();
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kServiceUnavailable);
    CHECK(e.detail().find(url) != std::string::npos);
    CHECK(IsEnvironmentError(e.code()));
  }
}

TEST_CASE("service errors carry the error field") {
  StubServiceOptions options;
  options.scorer_loaded = false;
  options.max_text_bytes = 8;
  StubService stub(options);
  ModelServiceClient client(stub.base_url());
  try {
    client.Score(Strings{"a"});
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kServiceError);
    CHECK(e.detail().find("NoCheckpoint") != std::string::npos);
  }
  CHECK_ERROR_CODE(client.Embed(Strings{"longer than eight bytes"}), ErrorCode::kServiceError);
}

TEST_CASE("stub status codes") {
  StubServiceOptions options;
  options.generator_loaded = false;
  StubService stub(options);
  httplib::Client http(stub.base_url());
  auto empty = http.Post("/v1/embed", R"({"texts":[]})", "application/json");
  REQUIRE(empty);
  CHECK(empty->status == 400);
  CHECK(nlohmann::json::parse(empty->body)["error"] == "EmptyInput");
  auto bad = http.Post("/v1/score", "nope", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  auto no_model = http.Post("/v1/generate", R"({"input":"x"})", "application/json");
  REQUIRE(no_model);
  CHECK(no_model->status == 503);
  CHECK(nlohmann::json::parse(no_model->body) == nlohmann::json{{"error", "NoCheckpoint"}});
}

TEST_CASE("generation honors the token budgets") {
  StubService stub;
  ModelServiceClient client(stub.base_url());
  std::string long_input;
  for (int i = 0; i < 10000; ++i) long_input += "字";
  const Generation g = client.Generate(long_input, 1024, 256);
  CHECK(g.output_tokens <= 256);
  CHECK(client.Generate(long_input).output == g.output);
  const std::string body = stub.last_body("/v1/generate");
  const auto request = nlohmann::json::parse(body);
  CHECK(request["input"] == long_input);
  CHECK(request["max_input_tokens"] == 1024);
  CHECK(request["max_new_tokens"] == 256);

  StubServiceOptions options;
  options.forced_output_tokens = 300;
  StubService liar(options);
  CHECK_ERROR_CODE(ModelServiceClient(liar.base_url()).Generate("x"), ErrorCode::kGenerationTooLong);
}

TEST_CASE("malformed responses are protocol errors") {
  httplib::Server server;
  server.Post("/v1/score", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"model":"m","scores":[2.0]})", "application/json");
  });
  server.Post("/v1/embed", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"model":"m","pooling":"mean","dim":2,"vectors":[[1.0]]})", "application/json");
  });
  server.Get("/v1/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("not json", "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  ModelServiceClient client("http://127.0.0.1:" + std::to_string(port));
  CHECK_ERROR_CODE(client.Score(Strings{"a"}), ErrorCode::kProtocolError);
  CHECK_ERROR_CODE(client.Embed(Strings{"a"}), ErrorCode::kProtocolError);
  CHECK_ERROR_CODE(client.Health(), ErrorCode::kProtocolError);
  server.stop();
  thread.join();
}

TEST_CASE("default URL comes from the environment") {
  ::setenv("REPSUMM_SERVICE_URL", "http://example.invalid:9", 1);
  CHECK(DefaultServiceUrl() == "http://example.invalid:9");
  ::unsetenv("REPSUMM_SERVICE_URL");
  CHECK(DefaultServiceUrl() == "http://127.0.0.1:8000");
}

}  // namespace
}  // namespace repsumm
