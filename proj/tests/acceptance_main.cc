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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.
#define DOCTEST_CONFIG_DISABLE

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "repsumm/cli.h"
#include "repsumm/corpus.h"
#include "repsumm/evalharness.h"
#include "repsumm/extractor.h"
#include "repsumm/labeling.h"
#include "repsumm/rouge.h"
#include "repsumm/stub_service.h"
#include "repsumm/synthetic.h"
#include "rouge_oracle.h"
#include "test_support.h"

namespace repsumm {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Pinned tolerances and limits.
constexpr size_t kRougePairs = 1000;
constexpr size_t kRougeAlphabet = 5;
constexpr size_t kRougeMaxLength = 8;
constexpr double kRougeTolerance = 1e-12;
constexpr double kRougeSeconds = 5.0;
constexpr size_t kIdentityCases = 100;
constexpr size_t kGradientProblems = 20;
constexpr size_t kGradientBatch = 5;
constexpr double kGradientStep = 1e-5;
constexpr double kGradientTolerance = 1e-4;
constexpr double kMinRecoveryR1 = 0.90;
constexpr double kMinLabelingAccuracy = 0.95;
constexpr double kRecoverySeconds = 60.0;
constexpr size_t kSplitCases = 200;
constexpr double kAggregationTolerance = 1e-9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fixed(double v, int places = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", places, v);
  return buf;
}

int Cli(const fs::path& workdir, std::vector<std::string> args, const std::string& url = "") {
  std::vector<std::string> full = {"--workdir", workdir.string()};
  if (!url.empty()) {
    full.push_back("--service-url");
    full.push_back(url);
  }
  full.insert(full.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = RunCli(full, out, err);
  if (code != 0) {
    std::cerr << "  repsumm";
    for (const auto& a : full) std::cerr << ' ' << a;
    std::cerr << " -> " << code << "\n  " << err.str();
  }
  return code;
}

// ROUGE-1/2 against clipped counts from linear scans and ROUGE-L against
// exhaustive subsequence search.
Outcome RougeOracleEquivalence() {
  std::mt19937_64 rng(20240101);
  const auto start = Clock::now();
  size_t mismatches = 0;
  double max_delta = 0.0;
  auto ratio = [](size_t a, size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / b; };
  auto f1 = [](double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; };
  for (size_t i = 0; i < kRougePairs; ++i) {
    const auto cand = oracle::RandomTokens(rng, 1 + rng() % kRougeAlphabet, kRougeMaxLength);
    const auto ref = oracle::RandomTokens(rng, 1 + rng() % kRougeAlphabet, kRougeMaxLength);
    for (size_t n : {1u, 2u}) {
      const size_t overlap = oracle::ClippedOverlap(cand, ref, n);
      const size_t ct = cand.size() >= n ? cand.size() - n + 1 : 0;
      const size_t rt = ref.size() >= n ? ref.size() - n + 1 : 0;
      const NgramCounts c = CountNgramOverlap(cand, ref, n);
      if (c.overlap != overlap || c.candidate_total != ct || c.reference_total != rt) ++mismatches;
      const RougeScore s = RougeN(cand, ref, n);
      const double p = ratio(overlap, ct), r = ratio(overlap, rt);
      for (double d : {s.precision - p, s.recall - r, s.f1 - f1(p, r)}) {
        max_delta = std::max(max_delta, std::abs(d));
      }
    }
    const size_t lcs = oracle::ExhaustiveLcs(cand, ref);
    if (LcsLength(cand, ref) != lcs) ++mismatches;
    const RougeScore l = RougeL(cand, ref);
    const double p = ratio(lcs, cand.size()), r = ratio(lcs, ref.size());
    for (double d : {l.precision - p, l.recall - r, l.f1 - f1(p, r)}) {
      max_delta = std::max(max_delta, std::abs(d));
    }
  }
  const double secs = Seconds(start);
  return {mismatches == 0 && max_delta < kRougeTolerance && secs < kRougeSeconds,
          std::to_string(kRougePairs) + " pairs, " + std::to_string(mismatches) +
              " count mismatches, max |delta| " + Sci(max_delta) + ", " + Fixed(secs, 3) +
              " s (limit " + Fixed(kRougeSeconds, 0) + " s)"};
}

// Random CJK and Latin texts of at least two tokens under their ROUGE
// tokenizer; with one token there are no bigrams and ROUGE-2 is 0 by rule.
Outcome IdentitySummary() {
  std::mt19937_64 rng(77);
  const std::vector<std::string> cjk = {"金", "利", "が", "低", "下", "株", "価", "。", "、", "円"};
  const std::vector<std::string> latin = {"rates", "fell", "stocks", "rose", "bond", "yield", "."};
  size_t failures = 0;
  for (size_t i = 0; i < kIdentityCases; ++i) {
    std::string text;
    const size_t len = 2 + rng() % 30;
    const bool use_cjk = rng() % 2 == 0;
    for (size_t k = 0; k < len; ++k) {
      text += use_cjk ? cjk[rng() % cjk.size()] : latin[rng() % latin.size()] + " ";
    }
    const RougeSet s = RougeAll(text, text, RougeConfig{});
    for (const RougeScore& v : {s.r1, s.r2, s.rl}) {
      if (v.precision != 1.0 || v.recall != 1.0 || v.f1 != 1.0) {
        ++failures;
        break;
      }
    }
  }
  return {failures == 0, std::to_string(kIdentityCases) + " texts of >= 2 tokens, " +
                             std::to_string(failures) + " not scoring 1.0/1.0/1.0"};
}

Outcome GradientCheck() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (size_t problem = 0; problem < kGradientProblems; ++problem) {
    const size_t dim = 2 + rng() % 8;
    LinearScorer s;
    s.weights.resize(dim);
    for (double& w : s.weights) w = 2.0 * u(rng);
    s.bias = u(rng);
    std::vector<TermVector> x;
    std::vector<double> y;
    for (size_t i = 0; i < kGradientBatch; ++i) {
      std::vector<double> dense(dim);
      for (double& v : dense) v = rng() % 3 ? u(rng) : 0.0;
      x.push_back(TermVector::FromDense(dense));
      y.push_back(static_cast<double>(rng() % 2));
    }
    const double l2 = 0.05 * (u(rng) + 1.0);
    const ObjectiveValue analytic = Objective(s, x, y, l2);
    for (size_t j = 0; j <= dim; ++j) {
      LinearScorer plus = s, minus = s;
      (j < dim ? plus.weights[j] : plus.bias) += kGradientStep;
      (j < dim ? minus.weights[j] : minus.bias) -= kGradientStep;
      const double numeric =
          (Objective(plus, x, y, l2).loss - Objective(minus, x, y, l2).loss) / (2 * kGradientStep);
      const double a = j < dim ? analytic.weight_gradient[j] : analytic.bias_gradient;
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-6});
      worst = std::max(worst, rel);
    }
  }
  std::ostringstream detail;
  detail << kGradientProblems << " problems of " << kGradientBatch << " examples, max relative error "
         << worst << " (limit " << kGradientTolerance << ")";
  return {worst < kGradientTolerance, detail.str()};
}

// Per-group dump lines of one report, as written by `evaluate --dump`.
std::vector<GroupScore> ReadDump(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return ReadGroupDump(in);
}

Outcome PlantedRecovery(const testing::TempDir& dir, std::vector<std::pair<fs::path, fs::path>>& emitted) {
  const auto start = Clock::now();
  const fs::path w = dir.path();
  bool ok = Cli(w, {"gen-synthetic", "--funds", "50", "--seed", "7"}) == 0 &&
            Cli(w, {"split", "--ratios", "0.7,0.1,0.2", "--seed", "0"}) == 0 &&
            Cli(w, {"label", "--backend", "tfidf", "--tau", "0.6"}) == 0 &&
            Cli(w, {"train", "--epochs", "9", "--batch", "4"}) == 0 &&
            Cli(w, {"evaluate", "--method", "ex-native", "--budget", "sentences:6", "--out",
                    "report.csv", "--dump", "groups.jsonl"}) == 0;
  if (!ok) return {false, "pipeline failed"};
  const double secs = Seconds(start);
  emitted.emplace_back(w / "report.csv", w / "groups.jsonl");

  const auto groups = ReadDump(w / "groups.jsonl");
  double r1 = 0.0;
  for (const GroupScore& g : groups) r1 += g.scores.r1.f1;
  r1 = groups.empty() ? 0.0 : r1 / groups.size();

  std::vector<LabeledSentence> labels = ReadLabels(w / "labels_train.jsonl");
  const auto val = ReadLabels(w / "labels_validation.jsonl");
  labels.insert(labels.end(), val.begin(), val.end());
  const double accuracy = LabelingAccuracy(labels, ReadTruth(w / "truth.jsonl"));

  return {r1 >= kMinRecoveryR1 && accuracy >= kMinLabelingAccuracy && secs < kRecoverySeconds,
          "mean test ROUGE-1 F1 " + Fixed(r1) + " over " + std::to_string(groups.size()) +
              " groups (min " + Fixed(kMinRecoveryR1, 2) + "), labeling accuracy " + Fixed(accuracy) +
              " over " + std::to_string(labels.size()) + " sentences (min " +
              Fixed(kMinLabelingAccuracy, 2) + "), " + Fixed(secs, 2) + " s (limit " +
              Fixed(kRecoverySeconds, 0) + " s)"};
}

std::set<std::string> DocIds(const std::vector<ReportGroup>& groups) {
  std::set<std::string> ids;
  for (const ReportGroup& g : groups) {
    ids.insert(g.investment.doc_id);
    for (const ReportDocument& m : g.monthlies) ids.insert(m.doc_id);
  }
  return ids;
}

Outcome SplitProperties() {
  std::mt19937_64 rng(4242);
  size_t failures = 0;
  for (size_t c = 0; c < kSplitCases; ++c) {
    const size_t n = rng() % 300;
    const uint64_t seed = rng();
    std::vector<ReportGroup> groups;
    for (size_t i = 0; i < n; ++i) {
      groups.push_back(testing::MakeGroup("F" + std::to_string(i), "P" + std::to_string(i % 3), "inv。",
                                          {"a。", "b。", "c。"}));
    }
    const DatasetSplit s = Split(groups, {0.7, 0.1, 0.2}, seed);
    // Integer floors of 10% and 20%; the remainder goes to train.
    const size_t val = n / 10, test = (2 * n) / 10;
    bool ok = s.validation.size() == val && s.test.size() == test && s.train.size() == n - val - test;

    std::map<std::string, int> owner;
    int bucket = 0;
    for (const auto* part : {&s.train, &s.validation, &s.test}) {
      for (const ReportGroup& g : *part) {
        // Every member of a group lands in the bucket of its investment report.
        for (const std::string& id : DocIds({g})) {
          ok = ok && owner.emplace(id, bucket).second;
        }
      }
      ++bucket;
    }
    ok = ok && owner.size() == DocIds(groups).size();

    const DatasetSplit again = Split(groups, {0.7, 0.1, 0.2}, seed);
    auto keys = [](const std::vector<ReportGroup>& gs) {
      std::vector<GroupKey> k;
      for (const ReportGroup& g : gs) k.push_back(g.key());
      return k;
    };
    ok = ok && keys(again.train) == keys(s.train) && keys(again.validation) == keys(s.validation) &&
         keys(again.test) == keys(s.test);
    failures += !ok;
  }
  return {failures == 0, std::to_string(kSplitCases) + " random (count, seed) cases, " +
                             std::to_string(failures) + " violating size, overlap, leakage or determinism"};
}

// Recomputes every emitted report from its per-group dump.
Outcome AggregationConsistency(const std::vector<std::pair<fs::path, fs::path>>& emitted) {
  if (emitted.empty()) return {false, "no reports were emitted"};
  double worst = 0.0;
  size_t csv_mismatches = 0;
  for (const auto& [csv_path, dump_path] : emitted) {
    const auto groups = ReadDump(dump_path);
    auto components = [](const RougeSet& s) {
      return std::vector<double>{s.r1.precision, s.r1.recall, s.r1.f1, s.r2.precision, s.r2.recall,
                                 s.r2.f1, s.rl.precision, s.rl.recall, s.rl.f1};
    };
    std::map<std::pair<std::string, std::string>, std::pair<size_t, std::vector<double>>> strata;
    std::vector<double> all(9, 0.0);
    for (const GroupScore& g : groups) {
      auto& [n, sum] = strata[{std::string(ToString(g.fund.asset_class)), std::string(ToString(g.fund.region))}];
      if (sum.empty()) sum.assign(9, 0.0);
      ++n;
      const auto c = components(g.scores);
      for (size_t i = 0; i < 9; ++i) {
        sum[i] += c[i];
        all[i] += c[i];
      }
    }
    for (double& v : all) v /= static_cast<double>(groups.size());
    std::vector<double> weighted(9, 0.0);
    for (const auto& [key, entry] : strata) {
      for (size_t i = 0; i < 9; ++i) weighted[i] += entry.second[i];  // n * mean == sum
    }
    for (size_t i = 0; i < 9; ++i) {
      weighted[i] /= static_cast<double>(groups.size());
      worst = std::max(worst, std::abs(weighted[i] - all[i]));
    }

    // The CSV must print exactly these recomputed means.
    std::ifstream csv(csv_path);
    std::string line;
    std::getline(csv, line);
    while (std::getline(csv, line)) {
      std::vector<std::string> cells;
      std::stringstream ss(line);
      for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
      if (cells.size() != 13) {
        ++csv_mismatches;
        continue;
      }
      std::vector<double> expected;
      size_t n = 0;
      if (cells[1] == "all") {
        expected = all;
        n = groups.size();
      } else {
        auto it = strata.find({cells[1], cells[2]});
        if (it == strata.end()) {
          ++csv_mismatches;
          continue;
        }
        n = it->second.first;
        for (double v : it->second.second) expected.push_back(v / static_cast<double>(n));
      }
      bool row_ok = cells[3] == std::to_string(n);
      for (size_t i = 0; i < 9; ++i) row_ok = row_ok && cells[4 + i] == FormatMetric(expected[i]);
      csv_mismatches += !row_ok;
    }
  }
  return {worst <= kAggregationTolerance && csv_mismatches == 0,
          std::to_string(emitted.size()) + " reports, max |All - weighted strata| " +
              Sci(worst) + " (limit 1e-9), " + std::to_string(csv_mismatches) +
              " CSV rows disagreeing with the dump"};
}

// Full pipeline for all three methods; returns the CSV bytes per method.
std::map<std::string, std::string> FullRun(const fs::path& w, const std::string& url,
                                           std::vector<std::pair<fs::path, fs::path>>& emitted) {
  std::map<std::string, std::string> csvs;
  if (Cli(w, {"gen-synthetic", "--funds", "30", "--seed", "11"}) != 0 ||
      Cli(w, {"split", "--seed", "5"}) != 0 || Cli(w, {"label"}) != 0 || Cli(w, {"train"}) != 0) {
    return csvs;
  }
  for (const std::string method : {"ex-native", "ex-remote", "ab-remote"}) {
    const std::string csv = method + ".csv", dump = method + ".groups.jsonl";
    if (Cli(w, {"evaluate", "--method", method, "--out", csv, "--dump", dump, "--workers", "3"}, url) != 0) {
      return {};
    }
    csvs[method] = testing::ReadFile(w / csv);
    emitted.emplace_back(w / csv, w / dump);
  }
  return csvs;
}

}  // namespace
}  // namespace repsumm

int main() {
  using namespace repsumm;
  // Remote paths must only ever reach the in-process stub.
  ::unsetenv("REPSUMM_SERVICE_URL");
  StubService stub;

  testing::TempDir recovery_dir, run_a, run_b;
  std::vector<std::pair<fs::path, fs::path>> emitted;
  std::map<std::string, std::string> first, second;

  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"rouge_oracle_equivalence", RougeOracleEquivalence},
      {"identity_summary", IdentitySummary},
      {"gradient_check", GradientCheck},
      {"planted_summary_recovery", [&] { return PlantedRecovery(recovery_dir, emitted); }},
      {"split_properties", SplitProperties},
      {"end_to_end_determinism",
       [&] {
         first = FullRun(run_a.path(), stub.base_url(), emitted);
         second = FullRun(run_b.path(), stub.base_url(), emitted);
         const bool ok = first.size() == 3 && first == second;
         return Outcome{ok, std::to_string(first.size()) + " methods run twice, CSV reports " +
                                (ok ? "byte-identical" : "differ or missing")};
       }},
      {"aggregation_consistency", [&] { return AggregationConsistency(emitted); }},
      {"remote_paths_use_stub",
       [&] {
         const size_t served = stub.request_count();
         const bool ok = first.count("ex-remote") && first.count("ab-remote") && served > 0;
         return Outcome{ok, "ex-remote and ab-remote served by the in-process protocol stub (" +
                                std::to_string(served) + " requests), no external service configured"};
       }},
  };

  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    failed += !o.pass;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
