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

#include "repsumm/evalharness.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "repsumm/error.h"
#include "repsumm/fingerprint.h"

namespace repsumm {
namespace {

using ordered_json = nlohmann::ordered_json;

struct GroupFailure {
  GroupKey key;
  ErrorCode code;
  std::string message;
};

std::string_view AssetLabel(AssetClass a) {
  switch (a) {
    case AssetClass::kStock: return "Stock";
    case AssetClass::kBond: return "Bond";
    case AssetClass::kRealEstate: return "Real estate";
    case AssetClass::kAssetCombination: return "Asset combination";
    case AssetClass::kOther: return "Other";
  }
  return "Other";
}

std::string_view RegionLabel(Region r) {
  switch (r) {
    case Region::kDomestic: return "D";
    case Region::kForeign: return "F";
    case Region::kDomesticForeign: return "DF";
  }
  return "D";
}

std::string UtcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// The nine (variant, P/R/F) components of a RougeSet, in CSV column order.
std::array<double, 9> Components(const RougeSet& s) {
  return {s.r1.precision, s.r1.recall, s.r1.f1, s.r2.precision, s.r2.recall,
          s.r2.f1,        s.rl.precision, s.rl.recall, s.rl.f1};
}

RougeSet FromComponents(const std::array<double, 9>& c) {
  RougeSet s;
  s.r1 = {c[0], c[1], c[2]};
  s.r2 = {c[3], c[4], c[5]};
  s.rl = {c[6], c[7], c[8]};
  return s;
}

StratumResult MeanOf(std::span<const GroupScore* const> members) {
  StratumResult r;
  r.n_groups = members.size();
  std::array<double, 9> sum{};
  for (const GroupScore* g : members) {
    const auto c = Components(g->scores);
    for (size_t k = 0; k < sum.size(); ++k) sum[k] += c[k];
  }
  if (!members.empty()) {
    for (double& v : sum) v /= static_cast<double>(members.size());
  }
  r.mean = FromComponents(sum);
  return r;
}

ordered_json ScoreJson(const RougeScore& s) {
  ordered_json j;
  j["p"] = s.precision;
  j["r"] = s.recall;
  j["f"] = s.f1;
  return j;
}

RougeScore ScoreFromJson(const nlohmann::json& j) {
  return {j.at("p").get<double>(), j.at("r").get<double>(), j.at("f").get<double>()};
}

std::string ConfigFingerprint(MethodId method, const ExperimentConfig& config,
                              const ExperimentArtifacts& artifacts) {
  std::ostringstream os;
  os << "method=" << ToString(method) << ";budget=" << config.budget.Name()
     << ";rouge=" << (config.rouge.tokenizer ? config.rouge.tokenizer->Name() : "auto")
     << ";max_input_terms=" << config.abstractive.max_input_terms
     << ";max_new_tokens=" << config.abstractive.max_new_tokens;
  if (artifacts.features) os << ";features=" << artifacts.features->Fingerprint();
  if (artifacts.scorer) os << ";scorer=" << Fingerprint(artifacts.scorer->ToJsonString());
  os << ";salt=" << config.fingerprint_salt;
  return Fingerprint(os.str());
}

}  // namespace

std::string_view ToString(MethodId method) {
  switch (method) {
    case MethodId::kExNative: return "ex-native";
    case MethodId::kExRemote: return "ex-remote";
    case MethodId::kAbRemote: return "ab-remote";
  }
  return "ex-native";
}

std::optional<MethodId> ParseMethodId(std::string_view name) {
  for (MethodId m : {MethodId::kExNative, MethodId::kExRemote, MethodId::kAbRemote}) {
    if (ToString(m) == name) return m;
  }
  return std::nullopt;
}

ExperimentResult RunExperimentWith(std::span<const ReportGroup> groups, std::string method,
                                   const Summarizer& summarize, const ExperimentConfig& config) {
  std::vector<std::string> summaries(groups.size());
  std::vector<GroupScore> scores(groups.size());
  std::vector<GroupFailure> failures;
  std::mutex failures_mu;
  std::atomic<size_t> next{0};

  auto worker = [&] {
    for (size_t i = next++; i < groups.size(); i = next++) {
      const ReportGroup& g = groups[i];
      try {
        summaries[i] = summarize(g);
        scores[i] = {g.key(), g.fund(), RougeAll(summaries[i], g.investment.text, config.rouge)};
      } catch (const Error& e) {
        std::lock_guard<std::mutex> lock(failures_mu);
        failures.push_back({g.key(), e.code(), e.what()});
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failures_mu);
        failures.push_back({g.key(), ErrorCode::kGroupFailures, e.what()});
      }
    }
  };
  const size_t workers = std::clamp<size_t>(config.workers, 1, std::max<size_t>(groups.size(), 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  if (!failures.empty()) {
    std::sort(failures.begin(), failures.end(),
              [](const GroupFailure& a, const GroupFailure& b) { return a.key < b.key; });
    const bool same_code = std::all_of(failures.begin(), failures.end(), [&](const GroupFailure& f) {
      return f.code == failures.front().code;
    });
    std::string detail = std::to_string(failures.size()) + " of " +
                         std::to_string(groups.size()) + " groups failed";
    for (size_t i = 0; i < failures.size() && i < 10; ++i) {
      detail += "; " + failures[i].key.ToString() + ": " + failures[i].message;
    }
    throw Error(same_code ? failures.front().code : ErrorCode::kGroupFailures, detail);
  }

  ExperimentResult result;
  result.report = Aggregate(std::move(method), scores);
  result.groups = std::move(scores);
  result.summaries = std::move(summaries);
  return result;
}

ExperimentResult RunExperiment(const DatasetSplit& split, MethodId method,
                               const ExperimentConfig& config,
                               const ExperimentArtifacts& artifacts) {
  Summarizer summarize;
  switch (method) {
    case MethodId::kExNative:
      if (artifacts.scorer == nullptr) {
        throw Error(ErrorCode::kMissingArtifact, "ex-native needs a trained scorer (run `train`)");
      }
      if (artifacts.features == nullptr) {
        throw Error(ErrorCode::kMissingArtifact, "ex-native needs the TFIDF feature model");
      }
      summarize = [&](const ReportGroup& g) {
        const std::vector<Sentence> sentences = MonthlySentences(g, config.segment);
        const auto scored = Score(*artifacts.scorer, sentences, *artifacts.features);
        return AssembleSummary(scored, config.budget, *artifacts.features);
      };
      break;
    case MethodId::kExRemote:
      if (artifacts.service == nullptr) {
        throw Error(ErrorCode::kMissingArtifact, "ex-remote needs a service client");
      }
      if (artifacts.features == nullptr) {
        throw Error(ErrorCode::kMissingArtifact, "ex-remote needs the TFIDF feature model");
      }
      summarize = [&](const ReportGroup& g) {
        const std::vector<Sentence> sentences = MonthlySentences(g, config.segment);
        const auto scored = Score(*artifacts.service, sentences);
        return AssembleSummary(scored, config.budget, *artifacts.features);
      };
      break;
    case MethodId::kAbRemote:
      if (artifacts.service == nullptr) {
        throw Error(ErrorCode::kMissingArtifact, "ab-remote needs a service client");
      }
      summarize = [&](const ReportGroup& g) {
        const Tokenizer tokenizer = artifacts.features
                                        ? artifacts.features->tokenizer()
                                        : Tokenizer::ForText(g.investment.text, 2);
        return SummarizeAbstractive(*artifacts.service, g, tokenizer, config.abstractive);
      };
      break;
  }
  ExperimentResult result =
      RunExperimentWith(split.test, std::string(ToString(method)), summarize, config);
  result.report.config_fingerprint = ConfigFingerprint(method, config, artifacts);
  result.report.timestamp = UtcTimestamp();
  return result;
}

ExperimentReport Aggregate(std::string method, std::span<const GroupScore> groups) {
  ExperimentReport report;
  report.method = std::move(method);
  std::vector<const GroupScore*> all;
  std::map<std::pair<AssetClass, Region>, std::vector<const GroupScore*>> strata;
  for (const GroupScore& g : groups) {
    all.push_back(&g);
    strata[{g.fund.asset_class, g.fund.region}].push_back(&g);
  }
  report.overall = MeanOf(all);
  for (const auto& [key, members] : strata) {
    StratumResult r = MeanOf(members);
    r.asset_class = key.first;
    r.region = key.second;
    report.strata.push_back(std::move(r));
  }
  return report;
}

std::string FormatMetric(double value) {
  if (!std::isfinite(value)) return "NA";
  char buf[512];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
  if (ec != std::errc()) return "NA";
  std::string_view repr(buf, static_cast<size_t>(end - buf));
  bool negative = false;
  if (!repr.empty() && repr.front() == '-') {
    negative = true;
    repr.remove_prefix(1);
  }
  const size_t dot = repr.find('.');
  std::string int_part(repr.substr(0, dot));
  std::string frac = dot == std::string_view::npos ? "" : std::string(repr.substr(dot + 1));

  constexpr size_t kPlaces = 3;
  bool round_up = false;
  if (frac.size() > kPlaces) {
    const char first_dropped = frac[kPlaces];
    const bool rest_nonzero =
        frac.find_first_not_of('0', kPlaces + 1) != std::string::npos;
    if (first_dropped > '5' || (first_dropped == '5' && rest_nonzero)) {
      round_up = true;
    } else if (first_dropped == '5') {
      round_up = (frac[kPlaces - 1] - '0') % 2 == 1;
    }
    frac.resize(kPlaces);
  }
  frac.append(kPlaces - frac.size(), '0');

  std::string digits = int_part + frac;
  if (round_up) {
    size_t i = digits.size();
    while (i > 0) {
      --i;
      if (digits[i] == '9') {
        digits[i] = '0';
      } else {
        ++digits[i];
        break;
      }
      if (i == 0) digits.insert(digits.begin(), '1');
    }
  }
  const std::string whole = digits.substr(0, digits.size() - kPlaces);
  const std::string out = whole + "." + digits.substr(digits.size() - kPlaces);
  const bool all_zero = out.find_first_not_of("0.") == std::string::npos;
  return (negative && !all_zero ? "-" : "") + out;
}

void EmitReport(const ExperimentReport& report, ReportFormat format, std::ostream& out) {
  auto count = [](size_t n) { return n == 0 ? std::string("NA") : std::to_string(n); };
  if (format == ReportFormat::kCsv) {
    out << "method,asset_class,region,n_groups,r1_p,r1_r,r1_f,r2_p,r2_r,r2_f,rl_p,rl_r,rl_f\n";
    auto row = [&](const StratumResult& s) {
      out << report.method << ','
          << (s.asset_class ? ToString(*s.asset_class) : "all") << ','
          << (s.region ? ToString(*s.region) : "all") << ',' << count(s.n_groups);
      for (double v : Components(s.mean)) out << ',' << FormatMetric(v);
      out << '\n';
    };
    row(report.overall);
    for (const StratumResult& s : report.strata) row(s);
    return;
  }

  out << "### " << report.method << "\n\n";
  out << "| Fund type | Region | n | ROUGE-1 | ROUGE-2 | ROUGE-L |\n";
  out << "|:--|:--|--:|--:|--:|--:|\n";
  auto row = [&](std::string_view asset, std::string_view region, const StratumResult& s) {
    out << "| " << asset << " | " << region << " | " << count(s.n_groups) << " | "
        << FormatMetric(s.mean.r1.f1) << " | " << FormatMetric(s.mean.r2.f1) << " | "
        << FormatMetric(s.mean.rl.f1) << " |\n";
  };
  row("All", "", report.overall);
  for (const StratumResult& s : report.strata) {
    row(s.asset_class ? AssetLabel(*s.asset_class) : "All",
        s.region ? RegionLabel(*s.region) : "", s);
  }
  if (!report.config_fingerprint.empty()) {
    out << "\nconfig " << report.config_fingerprint << "\n";
  }
}

void EmitReport(const ExperimentReport& report, ReportFormat format,
                const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  EmitReport(report, format, out);
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

void EmitMethodComparison(std::span<const ExperimentReport> reports, std::ostream& out) {
  out << "| Method | ROUGE-1 | ROUGE-2 | ROUGE-L |\n";
  out << "|:--|--:|--:|--:|\n";
  for (const ExperimentReport& r : reports) {
    out << "| " << r.method << " | " << FormatMetric(r.overall.mean.r1.f1) << " | "
        << FormatMetric(r.overall.mean.r2.f1) << " | " << FormatMetric(r.overall.mean.rl.f1)
        << " |\n";
  }
}

void WriteGroupDump(std::span<const GroupScore> groups, std::ostream& out) {
  for (const GroupScore& g : groups) {
    ordered_json j;
    j["fund_id"] = g.key.fund_id;
    j["period_key"] = g.key.period_key;
    j["asset_class"] = ToString(g.fund.asset_class);
    j["region"] = ToString(g.fund.region);
    j["r1"] = ScoreJson(g.scores.r1);
    j["r2"] = ScoreJson(g.scores.r2);
    j["rl"] = ScoreJson(g.scores.rl);
    out << j.dump(-1, ' ', false, ordered_json::error_handler_t::replace) << '\n';
  }
}

std::vector<GroupScore> ReadGroupDump(std::istream& in) {
  std::vector<GroupScore> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    try {
      if (j.is_discarded()) throw std::runtime_error("not JSON");
      GroupScore g;
      g.key = {j.at("fund_id").get<std::string>(), j.at("period_key").get<std::string>()};
      g.fund.fund_id = g.key.fund_id;
      auto asset = ParseAssetClass(j.at("asset_class").get<std::string>());
      auto region = ParseRegion(j.at("region").get<std::string>());
      if (!asset || !region) throw std::runtime_error("bad stratum");
      g.fund.asset_class = *asset;
      g.fund.region = *region;
      g.scores = {ScoreFromJson(j.at("r1")), ScoreFromJson(j.at("r2")), ScoreFromJson(j.at("rl"))};
      out.push_back(std::move(g));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kMalformedLine,
                  "group dump line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

double WeightedMeanGap(const ExperimentReport& report) {
  if (report.strata.empty()) return 0.0;
  std::array<double, 9> weighted{};
  double total = 0.0;
  for (const StratumResult& s : report.strata) {
    const auto c = Components(s.mean);
    for (size_t k = 0; k < weighted.size(); ++k) weighted[k] += static_cast<double>(s.n_groups) * c[k];
    total += static_cast<double>(s.n_groups);
  }
  if (total == 0.0) return 0.0;
  const auto overall = Components(report.overall.mean);
  double gap = 0.0;
  for (size_t k = 0; k < weighted.size(); ++k) {
    gap = std::max(gap, std::abs(overall[k] - weighted[k] / total));
  }
  return gap;
}

}  // namespace repsumm
