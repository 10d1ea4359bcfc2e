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

#ifndef REPSUMM_CLI_H_
#define REPSUMM_CLI_H_

#include <iosfwd>
#include <span>
#include <string>

namespace repsumm {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitEnvironment = 2;

// Runs the `repsumm` command line. `args` excludes the program name.
//
//   ingest <jsonl>             validate and normalize a corpus
//   split                      seeded grouped train/validation/test split
//   label                      similarity labels for train and validation
//   train                      fit the TFIDF logistic scorer
//   summarize                  summarize the test groups
//   evaluate                   ROUGE report over the test groups
//   gen-synthetic              planted-summary corpus with ground truth
//
// Artifacts live in --workdir under fixed names; relative paths given on the
// command line resolve against it.
int RunCli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace repsumm

#endif  // REPSUMM_CLI_H_
