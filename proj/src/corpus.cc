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

#include "repsumm/corpus.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "repsumm/error.h"
#include "repsumm/random.h"
#include "repsumm/utf8.h"

namespace repsumm {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kRatioTolerance = 1e-9;
// Absorbs representation error in ratio * N before flooring (0.1 * 30 etc).
constexpr double kFloorSlack = 1e-9;

[[noreturn]] void ThrowSchema(size_t line_no, std::string_view field,
                              std::string_view why) {
  throw Error(ErrorCode::kSchemaViolation,
              "line " + std::to_string(line_no) + ": field '" +
                  std::string(field) + "' " + std::string(why));
}

std::string RequireString(const nlohmann::json& obj, const char* field,
                          size_t line_no) {
  auto it = obj.find(field);
  if (it == obj.end()) ThrowSchema(line_no, field, "is missing");
  if (!it->is_string()) ThrowSchema(line_no, field, "is not a string");
  return it->get<std::string>();
}

ReportDocument ParseDocument(const nlohmann::json& obj, size_t line_no) {
  if (!obj.is_object()) {
    throw Error(ErrorCode::kMalformedLine,
                "line " + std::to_string(line_no) + ": not a JSON object");
  }
  ReportDocument doc;
  doc.doc_id = RequireString(obj, "doc_id", line_no);
  if (doc.doc_id.empty()) ThrowSchema(line_no, "doc_id", "is empty");
  doc.fund.fund_id = RequireString(obj, "fund_id", line_no);
  if (doc.fund.fund_id.empty()) ThrowSchema(line_no, "fund_id", "is empty");

  const std::string asset = RequireString(obj, "asset_class", line_no);
  auto asset_class = ParseAssetClass(asset);
  if (!asset_class) ThrowSchema(line_no, "asset_class", "has unknown value '" + asset + "'");
  doc.fund.asset_class = *asset_class;

  const std::string region_name = RequireString(obj, "region", line_no);
  auto region = ParseRegion(region_name);
  if (!region) ThrowSchema(line_no, "region", "has unknown value '" + region_name + "'");
  doc.fund.region = *region;

  const std::string kind_name = RequireString(obj, "kind", line_no);
  auto kind = ParseDocKind(kind_name);
  if (!kind) ThrowSchema(line_no, "kind", "has unknown value '" + kind_name + "'");
  doc.kind = *kind;

  doc.period_key = RequireString(obj, "period_key", line_no);
  if (doc.period_key.empty()) ThrowSchema(line_no, "period_key", "is empty");

  const std::string date = RequireString(obj, "date", line_no);
  auto ymd = ParseIsoDate(date);
  if (!ymd) ThrowSchema(line_no, "date", "is not an ISO-8601 date (YYYY-MM-DD)");
  doc.date = *ymd;

  doc.text = RequireString(obj, "text", line_no);
  if (utf8::TrimSpace(doc.text).empty()) ThrowSchema(line_no, "text", "is blank");
  return doc;
}

ordered_json ToJson(const ReportDocument& doc) {
  ordered_json j;
  j["doc_id"] = doc.doc_id;
  j["fund_id"] = doc.fund.fund_id;
  j["asset_class"] = ToString(doc.fund.asset_class);
  j["region"] = ToString(doc.fund.region);
  j["kind"] = ToString(doc.kind);
  j["period_key"] = doc.period_key;
  j["date"] = FormatIsoDate(doc.date);
  j["text"] = doc.text;
  return j;
}

bool MonthlyBefore(const ReportDocument& a, const ReportDocument& b) {
  if (a.date != b.date) return a.date < b.date;
  return a.doc_id < b.doc_id;
}

ordered_json KeysToJson(std::span<const ReportGroup> groups) {
  ordered_json arr = ordered_json::array();
  for (const ReportGroup& g : groups) {
    ordered_json k;
    k["fund_id"] = g.investment.fund.fund_id;
    k["period_key"] = g.investment.period_key;
    arr.push_back(std::move(k));
  }
  return arr;
}

}  // namespace

std::string_view ToString(AssetClass v) {
  switch (v) {
    case AssetClass::kStock: return "stock";
    case AssetClass::kBond: return "bond";
    case AssetClass::kRealEstate: return "real_estate";
    case AssetClass::kAssetCombination: return "asset_combination";
    case AssetClass::kOther: return "other";
  }
  return "other";
}

std::string_view ToString(Region v) {
  switch (v) {
    case Region::kDomestic: return "domestic";
    case Region::kForeign: return "foreign";
    case Region::kDomesticForeign: return "domestic_foreign";
  }
  return "domestic";
}

std::string_view ToString(DocKind v) {
  return v == DocKind::kMonthly ? "monthly" : "investment";
}

std::optional<AssetClass> ParseAssetClass(std::string_view s) {
  for (AssetClass v : kAllAssetClasses) {
    if (ToString(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<Region> ParseRegion(std::string_view s) {
  for (Region v : kAllRegions) {
    if (ToString(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<DocKind> ParseDocKind(std::string_view s) {
  if (s == "monthly") return DocKind::kMonthly;
  if (s == "investment") return DocKind::kInvestment;
  return std::nullopt;
}

std::optional<std::chrono::year_month_day> ParseIsoDate(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  auto number = [&](size_t pos, size_t len) -> std::optional<int> {
    int v = 0;
    const char* first = s.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, v);
    if (ec != std::errc() || ptr != first + len) return std::nullopt;
    return v;
  };
  auto y = number(0, 4);
  auto m = number(5, 2);
  auto d = number(8, 2);
  if (!y || !m || !d) return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year{*y},
                                  std::chrono::month{static_cast<unsigned>(*m)},
                                  std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return ymd;
}

std::string FormatIsoDate(const std::chrono::year_month_day& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

std::vector<ReportDocument> ParseCorpus(std::istream& in) {
  std::vector<ReportDocument> docs;
  std::unordered_set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded()) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) + ": not valid JSON");
    }
    ReportDocument doc = ParseDocument(obj, line_no);
    if (!seen.insert(doc.doc_id).second) {
      throw Error(ErrorCode::kDuplicateId, doc.doc_id);
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<ReportDocument> Ingest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return ParseCorpus(in);
}

void SerializeCorpus(std::span<const ReportDocument> docs, std::ostream& out) {
  for (const ReportDocument& doc : docs) {
    out << ToJson(doc).dump(-1, ' ', /*ensure_ascii=*/false) << '\n';
  }
}

void WriteCorpus(std::span<const ReportDocument> docs,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  SerializeCorpus(docs, out);
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

std::vector<ReportGroup> Group(std::span<const ReportDocument> docs) {
  struct Bucket {
    std::vector<const ReportDocument*> investments;
    std::vector<const ReportDocument*> monthlies;
  };
  std::map<GroupKey, Bucket> buckets;
  for (const ReportDocument& doc : docs) {
    Bucket& b = buckets[GroupKey{doc.fund.fund_id, doc.period_key}];
    (doc.kind == DocKind::kInvestment ? b.investments : b.monthlies).push_back(&doc);
  }

  std::vector<ReportGroup> groups;
  groups.reserve(buckets.size());
  for (const auto& [key, bucket] : buckets) {
    if (bucket.investments.empty()) {
      throw Error(ErrorCode::kOrphanMonthlies, key.ToString());
    }
    if (bucket.investments.size() > 1) {
      throw Error(ErrorCode::kDuplicateInvestment, key.ToString());
    }
    if (bucket.monthlies.empty()) {
      throw Error(ErrorCode::kEmptyGroup,
                  key.ToString() + ": investment report has no monthly reports");
    }
    ReportGroup g;
    g.investment = *bucket.investments.front();
    for (const ReportDocument* m : bucket.monthlies) {
      if (m->fund != g.investment.fund) {
        throw Error(ErrorCode::kInconsistentFund,
                    key.ToString() + ": " + m->doc_id +
                        " disagrees with its investment report on fund metadata");
      }
      g.monthlies.push_back(*m);
    }
    std::sort(g.monthlies.begin(), g.monthlies.end(), MonthlyBefore);
    groups.push_back(std::move(g));
  }
  return groups;
}

std::array<size_t, 3> SplitSizes(size_t n, const SplitRatios& ratios) {
  const bool non_negative =
      ratios.train >= 0.0 && ratios.validation >= 0.0 && ratios.test >= 0.0;
  const double sum = ratios.train + ratios.validation + ratios.test;
  if (!non_negative || !std::isfinite(sum) || std::abs(sum - 1.0) > kRatioTolerance) {
    std::ostringstream msg;
    msg << "ratios (" << ratios.train << ", " << ratios.validation << ", "
        << ratios.test << ") must be non-negative and sum to 1";
    throw Error(ErrorCode::kBadRatios, msg.str());
  }
  const double total = static_cast<double>(n);
  size_t val = static_cast<size_t>(std::floor(ratios.validation * total + kFloorSlack));
  size_t test = static_cast<size_t>(std::floor(ratios.test * total + kFloorSlack));
  val = std::min(val, n);
  test = std::min(test, n - val);
  return {n - val - test, val, test};
}

DatasetSplit Split(std::span<const ReportGroup> groups, const SplitRatios& ratios,
                   uint64_t seed) {
  const auto [n_train, n_val, n_test] = SplitSizes(groups.size(), ratios);
  std::vector<size_t> order(groups.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  DeterministicRng rng(seed);
  rng.Shuffle(std::span<size_t>(order));

  DatasetSplit split;
  split.seed = seed;
  for (size_t i = 0; i < order.size(); ++i) {
    const ReportGroup& g = groups[order[i]];
    if (i < n_train) {
      split.train.push_back(g);
    } else if (i < n_train + n_val) {
      split.validation.push_back(g);
    } else {
      split.test.push_back(g);
    }
  }
  (void)n_test;
  return split;
}

void WriteSplit(const DatasetSplit& split, const SplitRatios& ratios,
                const std::filesystem::path& path) {
  ordered_json j;
  j["seed"] = split.seed;
  j["ratios"] = {ratios.train, ratios.validation, ratios.test};
  j["train"] = KeysToJson(split.train);
  j["validation"] = KeysToJson(split.validation);
  j["test"] = KeysToJson(split.test);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

DatasetSplit LoadSplit(const std::filesystem::path& path,
                       std::span<const ReportGroup> groups) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingArtifact, "split file " + path.string());
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kSchemaViolation, path.string() + ": not a split file");
  }
  std::map<GroupKey, const ReportGroup*> by_key;
  for (const ReportGroup& g : groups) by_key[g.key()] = &g;

  auto resolve = [&](const char* part) {
    std::vector<ReportGroup> out;
    if (!j.contains(part) || !j[part].is_array()) {
      throw Error(ErrorCode::kSchemaViolation,
                  path.string() + ": missing '" + part + "' list");
    }
    for (const auto& k : j[part]) {
      GroupKey key{k.value("fund_id", ""), k.value("period_key", "")};
      auto it = by_key.find(key);
      if (it == by_key.end()) {
        throw Error(ErrorCode::kSchemaViolation,
                    path.string() + ": group " + key.ToString() + " not in corpus");
      }
      out.push_back(*it->second);
    }
    return out;
  };
  DatasetSplit split;
  split.seed = j.value("seed", uint64_t{0});
  split.train = resolve("train");
  split.validation = resolve("validation");
  split.test = resolve("test");
  return split;
}

}  // namespace repsumm
