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

#ifndef REPSUMM_TESTS_ROUGE_ORACLE_H_
#define REPSUMM_TESTS_ROUGE_ORACLE_H_

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

// Brute-force ROUGE ingredients for short token sequences.
namespace repsumm::oracle {

using Tokens = std::vector<std::string>;

inline size_t Occurrences(const Tokens& seq, const Tokens& gram) {
  size_t count = 0;
  for (size_t i = 0; i + gram.size() <= seq.size(); ++i) {
    bool match = true;
    for (size_t k = 0; k < gram.size(); ++k) match = match && seq[i + k] == gram[k];
    count += match;
  }
  return count;
}

// Sum over distinct candidate n-grams of min(count in candidate, count in
// reference), each count taken by a linear scan.
inline size_t ClippedOverlap(const Tokens& cand, const Tokens& ref, size_t n) {
  std::vector<Tokens> seen;
  size_t overlap = 0;
  for (size_t i = 0; i + n <= cand.size(); ++i) {
    Tokens gram(cand.begin() + static_cast<std::ptrdiff_t>(i),
                cand.begin() + static_cast<std::ptrdiff_t>(i + n));
    if (std::find(seen.begin(), seen.end(), gram) != seen.end()) continue;
    seen.push_back(gram);
    overlap += std::min(Occurrences(cand, gram), Occurrences(ref, gram));
  }
  return overlap;
}

inline bool IsSubsequence(const Tokens& sub, const Tokens& seq) {
  size_t j = 0;
  for (size_t i = 0; i < seq.size() && j < sub.size(); ++i) j += seq[i] == sub[j];
  return j == sub.size();
}

// Longest subsequence of `a` (over all 2^|a| masks) that is also one of `b`.
inline size_t ExhaustiveLcs(const Tokens& a, const Tokens& b) {
  size_t best = 0;
  for (uint32_t mask = 0; mask < (1u << a.size()); ++mask) {
    Tokens sub;
    for (size_t i = 0; i < a.size(); ++i) {
      if (mask & (1u << i)) sub.push_back(a[i]);
    }
    if (sub.size() > best && IsSubsequence(sub, b)) best = sub.size();
  }
  return best;
}

inline Tokens RandomTokens(std::mt19937_64& rng, size_t alphabet, size_t max_len) {
  Tokens out(rng() % (max_len + 1));
  for (std::string& t : out) t = std::string(1, static_cast<char>('a' + rng() % alphabet));
  return out;
}

}  // namespace repsumm::oracle

#endif  // REPSUMM_TESTS_ROUGE_ORACLE_H_
