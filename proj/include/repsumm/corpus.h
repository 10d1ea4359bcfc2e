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

#ifndef REPSUMM_CORPUS_H_
#define REPSUMM_CORPUS_H_

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace repsumm {

enum class AssetClass { kStock, kBond, kRealEstate, kAssetCombination, kOther };
enum class Region { kDomestic, kForeign, kDomesticForeign };
enum class DocKind { kMonthly, kInvestment };

inline constexpr std::array<AssetClass, 5> kAllAssetClasses = {
    AssetClass::kStock, AssetClass::kBond, AssetClass::kRealEstate,
    AssetClass::kAssetCombination, AssetClass::kOther};
inline constexpr std::array<Region, 3> kAllRegions = {
    Region::kDomestic, Region::kForeign, Region::kDomesticForeign};

// Wire names used in the JSONL corpus ("stock", "domestic_foreign", ...).
std::string_view ToString(AssetClass v);
std::string_view ToString(Region v);
std::string_view ToString(DocKind v);
std::optional<AssetClass> ParseAssetClass(std::string_view s);
std::optional<Region> ParseRegion(std::string_view s);
std::optional<DocKind> ParseDocKind(std::string_view s);

struct FundMeta {
  std::string fund_id;
  AssetClass asset_class = AssetClass::kOther;
  Region region = Region::kDomestic;

  friend bool operator==(const FundMeta&, const FundMeta&) = default;
};

struct ReportDocument {
  std::string doc_id;
  FundMeta fund;
  DocKind kind = DocKind::kMonthly;
  std::string period_key;
  std::chrono::year_month_day date;
  std::string text;

  friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

// Strict YYYY-MM-DD.
std::optional<std::chrono::year_month_day> ParseIsoDate(std::string_view s);
std::string FormatIsoDate(const std::chrono::year_month_day& d);

// Identifies a summarization unit: one fund's reporting period.
struct GroupKey {
  std::string fund_id;
  std::string period_key;

  friend auto operator<=>(const GroupKey&, const GroupKey&) = default;
  std::string ToString() const { return fund_id + "/" + period_key; }
};

// One investment report with the monthly reports it summarizes, monthlies
// ascending by (date, doc_id).
struct ReportGroup {
  ReportDocument investment;
  std::vector<ReportDocument> monthlies;

  GroupKey key() const { return {investment.fund.fund_id, investment.period_key}; }
  const FundMeta& fund() const { return investment.fund; }
};

struct SplitRatios {
  double train = 0.7;
  double validation = 0.1;
  double test = 0.2;
};

struct DatasetSplit {
  std::vector<ReportGroup> train;
  std::vector<ReportGroup> validation;
  std::vector<ReportGroup> test;
  uint64_t seed = 0;
};

// Parses one JSONL corpus. Throws MalformedLine, SchemaViolation or
// DuplicateId (validation) and IoError when the file cannot be read.
std::vector<ReportDocument> Ingest(const std::filesystem::path& path);
std::vector<ReportDocument> ParseCorpus(std::istream& in);

// Writes documents with keys in schema order, one object per line.
void SerializeCorpus(std::span<const ReportDocument> docs, std::ostream& out);
void WriteCorpus(std::span<const ReportDocument> docs,
                 const std::filesystem::path& path);

// Builds one group per (fund_id, period_key), ordered by key.
std::vector<ReportGroup> Group(std::span<const ReportDocument> docs);

// Seeded shuffle, then floor(ratio * N) groups to validation and test and
// the remainder to train.
DatasetSplit Split(std::span<const ReportGroup> groups, const SplitRatios& ratios,
                   uint64_t seed);

// Sizes Split() will produce for `n` groups: {train, validation, test}.
std::array<size_t, 3> SplitSizes(size_t n, const SplitRatios& ratios);

// Split files record group keys only; LoadSplit resolves them against the
// grouped corpus.
void WriteSplit(const DatasetSplit& split, const SplitRatios& ratios,
                const std::filesystem::path& path);
DatasetSplit LoadSplit(const std::filesystem::path& path,
                       std::span<const ReportGroup> groups);

}  // namespace repsumm

#endif  // REPSUMM_CORPUS_H_
