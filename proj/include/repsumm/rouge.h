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

#ifndef REPSUMM_ROUGE_H_
#define REPSUMM_ROUGE_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "repsumm/textproc.h"

namespace repsumm {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  // precision = matched / candidate_total, recall = matched / reference_total,
  // f1 = 2PR / (P + R); a zero denominator yields 0 for that ratio.
  static RougeScore FromCounts(size_t matched, size_t candidate_total, size_t reference_total);
};

// Integer ingredients of a ROUGE-N score.
struct NgramCounts {
  size_t overlap = 0;
  size_t candidate_total = 0;
  size_t reference_total = 0;
};

// Clipped overlap: sum over distinct n-grams of min(candidate count,
// reference count). `n` must be >= 1.
NgramCounts CountNgramOverlap(std::span<const std::string> candidate,
                              std::span<const std::string> reference, size_t n);

// Longest common subsequence length, O(|a| |b|) time, O(|b|) memory.
size_t LcsLength(std::span<const std::string> a, std::span<const std::string> b);

RougeScore RougeN(std::span<const std::string> candidate, std::span<const std::string> reference,
                  size_t n);
RougeScore RougeL(std::span<const std::string> candidate, std::span<const std::string> reference);

struct RougeConfig {
  // nullopt: character unigrams when the pair is mostly CJK, whitespace
  // tokens otherwise.
  std::optional<Tokenizer> tokenizer;
};

Tokenizer ResolveRougeTokenizer(const RougeConfig& config, std::string_view candidate,
                                std::string_view reference);

RougeScore RougeN(std::string_view candidate, std::string_view reference, size_t n,
                  const RougeConfig& config = {});
RougeScore RougeL(std::string_view candidate, std::string_view reference,
                  const RougeConfig& config = {});

struct RougeSet {
  RougeScore r1;
  RougeScore r2;
  RougeScore rl;
};

// ROUGE-1, ROUGE-2 and ROUGE-L (summary-level LCS) over one tokenization.
RougeSet RougeAll(std::string_view candidate, std::string_view reference,
                  const RougeConfig& config = {});

}  // namespace repsumm

#endif  // REPSUMM_ROUGE_H_
