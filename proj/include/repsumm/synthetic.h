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

#ifndef REPSUMM_SYNTHETIC_H_
#define REPSUMM_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "repsumm/corpus.h"
#include "repsumm/labeling.h"

namespace repsumm {

struct SyntheticOptions {
  size_t funds = 10;
  uint64_t seed = 7;
  size_t monthlies_per_group = 6;
  // Filler sentences per monthly besides its key sentence.
  size_t filler_sentences = 3;
  // Probability that an investment report gets one extra sentence that is
  // not taken from any monthly.
  double noise_probability = 0.5;
};

// (doc_id, sentence index) of a planted key sentence.
using SentenceId = std::pair<std::string, size_t>;

struct SyntheticCorpus {
  std::vector<ReportDocument> documents;
  std::set<SentenceId> key_sentences;
};

// One group per fund. Each monthly holds one market-commentary key sentence
// among fund-administration filler; the investment report is the key
// sentences in date order, plus an optional noise sentence. Deterministic
// in the options.
SyntheticCorpus GenerateSynthetic(const SyntheticOptions& options);

// JSONL of {"doc_id", "index"} objects.
void WriteTruth(const std::set<SentenceId>& keys, const std::filesystem::path& path);
std::set<SentenceId> ReadTruth(const std::filesystem::path& path);

// Fraction of labeled sentences whose label matches key-sentence membership.
double LabelingAccuracy(std::span<const LabeledSentence> labels, const std::set<SentenceId>& keys);

}  // namespace repsumm

#endif  // REPSUMM_SYNTHETIC_H_
