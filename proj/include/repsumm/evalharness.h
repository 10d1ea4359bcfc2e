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

#ifndef REPSUMM_EVALHARNESS_H_
#define REPSUMM_EVALHARNESS_H_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "repsumm/corpus.h"
#include "repsumm/extractor.h"
#include "repsumm/rouge.h"
#include "repsumm/service_client.h"

namespace repsumm {

// ExNative: TFIDF logistic scorer. ExRemote: sidecar /v1/score.
// AbRemote: sidecar /v1/generate.
enum class MethodId { kExNative, kExRemote, kAbRemote };

std::string_view ToString(MethodId method);
std::optional<MethodId> ParseMethodId(std::string_view name);

// One row of a report; asset_class and region are both unset for the All row.
struct StratumResult {
  std::optional<AssetClass> asset_class;
  std::optional<Region> region;
  size_t n_groups = 0;
  RougeSet mean;

  bool is_all() const { return !asset_class && !region; }
};

struct ExperimentReport {
  std::string method;
  StratumResult overall;
  std::vector<StratumResult> strata;
  std::string config_fingerprint;
  std::string timestamp;
};

// Per-group outcome, dumped alongside every report.
struct GroupScore {
  GroupKey key;
  FundMeta fund;
  RougeSet scores;
};

struct ExperimentResult {
  ExperimentReport report;
  std::vector<GroupScore> groups;
  std::vector<std::string> summaries;
};

struct ExperimentConfig {
  SummaryBudget budget = SummaryBudget::MaxTokens(256);
  RougeConfig rouge;
  AbstractiveConfig abstractive;
  SegmentOptions segment;
  // Groups summarized concurrently; results are reduced in input order.
  size_t workers = 1;
  // Extra text folded into the config fingerprint (e.g. CLI settings).
  std::string fingerprint_salt;
};

struct ExperimentArtifacts {
  const TfidfModel* features = nullptr;
  const LinearScorer* scorer = nullptr;
  const ModelServiceClient* service = nullptr;
};

using Summarizer = std::function<std::string(const ReportGroup&)>;

// Summarizes every test group with `method` and scores it against the
// group's investment report. Throws MissingArtifact when the method's
// artifacts are absent, and GroupFailures (or the single group's own error)
// when any group fails.
ExperimentResult RunExperiment(const DatasetSplit& split, MethodId method,
                               const ExperimentConfig& config,
                               const ExperimentArtifacts& artifacts);

// Same evaluation loop with a caller-provided summarizer.
ExperimentResult RunExperimentWith(std::span<const ReportGroup> groups, std::string method,
                                   const Summarizer& summarize, const ExperimentConfig& config);

// Macro averages: per-stratum means of per-group P, R and F1 plus the All
// row over every group. Strata are ordered by (asset class, region).
ExperimentReport Aggregate(std::string method, std::span<const GroupScore> groups);

// Three decimals, rounding half to even on the shortest decimal form of
// `value` (so 0.7045 prints "0.704"). Non-finite values print "NA".
std::string FormatMetric(double value);

enum class ReportFormat { kCsv, kMarkdown };

// CSV: method,asset_class,region,n_groups,r1_p,r1_r,r1_f,r2_p,...,rl_f with
// the All row first. Markdown: one F1 table per method, All row first.
void EmitReport(const ExperimentReport& report, ReportFormat format, std::ostream& out);
// Throws IoError.
void EmitReport(const ExperimentReport& report, ReportFormat format,
                const std::filesystem::path& path);

// Markdown comparison table with one All row per method.
void EmitMethodComparison(std::span<const ExperimentReport> reports, std::ostream& out);

// Per-group JSONL dump, one object per group in evaluation order.
void WriteGroupDump(std::span<const GroupScore> groups, std::ostream& out);
std::vector<GroupScore> ReadGroupDump(std::istream& in);

// Largest |All - n-weighted mean of strata| over P, R and F1 of all three
// variants.
double WeightedMeanGap(const ExperimentReport& report);

}  // namespace repsumm

#endif  // REPSUMM_EVALHARNESS_H_
