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

#ifndef REPSUMM_STUB_SERVICE_H_
#define REPSUMM_STUB_SERVICE_H_

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace repsumm {

struct StubServiceOptions {
  std::string host = "127.0.0.1";
  // 0 picks a free port.
  int port = 0;
  size_t embed_dim = 64;
  bool embed_loaded = true;
  bool scorer_loaded = true;
  bool generator_loaded = true;
  // Texts longer than this (bytes) are rejected with 413.
  size_t max_text_bytes = 1 << 20;
  // When >= 0, /v1/generate reports this many output tokens regardless of
  // the output, to exercise client-side budget checks.
  int forced_output_tokens = -1;
};

// Deterministic in-process implementation of the sidecar /v1 protocol.
//   /v1/embed     hashed character-bigram counts, L2-normalized ("mean" pooling)
//   /v1/score     logistic of a hash of the text
//   /v1/generate  echoes the input, truncated to max_input_tokens and then
//                 max_new_tokens code points
//   /v1/health    loaded-model inventory
// Serves on a background thread from construction until destruction.
class StubService {
 public:
  explicit StubService(StubServiceOptions options = {});
  ~StubService();
  StubService(const StubService&) = delete;
  StubService& operator=(const StubService&) = delete;

  std::string base_url() const;
  int port() const { return port_; }

  size_t request_count() const { return requests_.load(); }
  // Body of the most recent request to `path`, empty if none.
  std::string last_body(const std::string& path) const;

  // Blocks until the server is stopped (for the standalone binary).
  void Wait();
  void Stop();

 private:
  void Install();

  StubServiceOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<size_t> requests_{0};
  mutable std::mutex mu_;
  std::map<std::string, std::string> last_bodies_;
};

}  // namespace repsumm

#endif  // REPSUMM_STUB_SERVICE_H_
