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

// Standalone deterministic model service for local runs of the remote
// methods. Prints the base URL, then serves until killed.
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "repsumm/stub_service.h"

int main(int argc, char** argv) {
  CLI::App app{"Deterministic stand-in for the model service", "repsumm_stub_server"};
  repsumm::StubServiceOptions options;
  app.add_option("--host", options.host)->capture_default_str();
  app.add_option("--port", options.port, "0 picks a free port")->capture_default_str();
  app.add_option("--embed-dim", options.embed_dim)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  repsumm::StubService service(options);
  std::cout << service.base_url() << std::endl;
  service.Wait();
  return 0;
}
