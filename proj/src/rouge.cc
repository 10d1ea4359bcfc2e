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

#include "repsumm/rouge.h"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <vector>

#include "repsumm/error.h"
#include "repsumm/utf8.h"

namespace repsumm {
namespace {

using Ngram = std::vector<std::string_view>;

std::map<Ngram, size_t> CountNgrams(std::span<const std::string> tokens, size_t n) {
  std::map<Ngram, size_t> counts;
  if (tokens.size() < n) return counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[Ngram(tokens.begin() + static_cast<ptrdiff_t>(i),
                   tokens.begin() + static_cast<ptrdiff_t>(i + n))];
  }
  return counts;
}

}  // namespace

RougeScore RougeScore::FromCounts(size_t matched, size_t candidate_total, size_t reference_total) {
  RougeScore s;
  if (candidate_total > 0) s.precision = static_cast<double>(matched) / static_cast<double>(candidate_total);
  if (reference_total > 0) s.recall = static_cast<double>(matched) / static_cast<double>(reference_total);
  if (s.precision + s.recall > 0.0) {
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  }
  return s;
}

NgramCounts CountNgramOverlap(std::span<const std::string> candidate,
                              std::span<const std::string> reference, size_t n) {
  if (n == 0) throw Error(ErrorCode::kBadConfig, "ROUGE-N order must be >= 1");
  NgramCounts out;
  out.candidate_total = candidate.size() >= n ? candidate.size() - n + 1 : 0;
  out.reference_total = reference.size() >= n ? reference.size() - n + 1 : 0;
  const auto cand = CountNgrams(candidate, n);
  const auto ref = CountNgrams(reference, n);
  for (const auto& [gram, count] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) out.overlap += std::min(count, it->second);
  }
  return out;
}

size_t LcsLength(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() || b.empty()) return 0;
  // Intern tokens so the inner loop compares integers.
  std::unordered_map<std::string_view, int> ids;
  auto intern = [&](std::span<const std::string> seq) {
    std::vector<int> out;
    out.reserve(seq.size());
    for (const std::string& t : seq) {
      out.push_back(ids.try_emplace(t, static_cast<int>(ids.size())).first->second);
    }
    return out;
  };
  const std::vector<int> x = intern(a);
  const std::vector<int> y = intern(b);
  std::vector<size_t> prev(y.size() + 1, 0), cur(y.size() + 1, 0);
  for (size_t i = 1; i <= x.size(); ++i) {
    for (size_t j = 1; j <= y.size(); ++j) {
      cur[j] = x[i - 1] == y[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[y.size()];
}

RougeScore RougeN(std::span<const std::string> candidate, std::span<const std::string> reference,
                  size_t n) {
  const NgramCounts c = CountNgramOverlap(candidate, reference, n);
  return RougeScore::FromCounts(c.overlap, c.candidate_total, c.reference_total);
}

RougeScore RougeL(std::span<const std::string> candidate, std::span<const std::string> reference) {
  return RougeScore::FromCounts(LcsLength(candidate, reference), candidate.size(),
                                reference.size());
}

Tokenizer ResolveRougeTokenizer(const RougeConfig& config, std::string_view candidate,
                                std::string_view reference) {
  if (config.tokenizer) return *config.tokenizer;
  std::string sample(candidate);
  sample.push_back('\n');
  sample.append(reference);
  return Tokenizer::ForText(sample, 1);
}

RougeScore RougeN(std::string_view candidate, std::string_view reference, size_t n,
                  const RougeConfig& config) {
  const Tokenizer tok = ResolveRougeTokenizer(config, candidate, reference);
  return RougeN(tok.Tokenize(candidate), tok.Tokenize(reference), n);
}

RougeScore RougeL(std::string_view candidate, std::string_view reference,
                  const RougeConfig& config) {
  const Tokenizer tok = ResolveRougeTokenizer(config, candidate, reference);
  return RougeL(tok.Tokenize(candidate), tok.Tokenize(reference));
}

RougeSet RougeAll(std::string_view candidate, std::string_view reference,
                  const RougeConfig& config) {
  const Tokenizer tok = ResolveRougeTokenizer(config, candidate, reference);
  const std::vector<std::string> c = tok.Tokenize(candidate);
  const std::vector<std::string> r = tok.Tokenize(reference);
  return {RougeN(c, r, 1), RougeN(c, r, 2), RougeL(c, r)};
}

}  // namespace repsumm
