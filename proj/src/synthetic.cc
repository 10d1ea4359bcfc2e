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

#include "repsumm/synthetic.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "repsumm/error.h"
#include "repsumm/random.h"

namespace repsumm {
namespace {

constexpr std::array kDomesticPlaces = {"国内", "日本"};
constexpr std::array kForeignPlaces = {"米国", "欧州", "新興国", "アジア", "豪州"};

constexpr std::array kCauses = {
    "米中通商交渉への懸念の高まり", "FRBによる利下げ観測", "原油価格の急落",
    "企業業績の改善", "世界的な景気減速懸念", "欧州の政治不安",
    "堅調な雇用統計の発表", "中央銀行の追加金融緩和", "地政学リスクの高まり",
    "円高の進行", "インフレ率の鈍化", "長期金利の急上昇",
    "新興国通貨の下落", "好調な個人消費", "格付け会社による格上げ",
};

constexpr std::array kDirections = {"上昇", "下落", "小幅に上昇", "小幅に下落",
                                    "大きく上昇", "大きく下落"};

constexpr std::array kSectors = {"情報技術", "金融", "ヘルスケア", "公益", "素材", "資本財"};
constexpr std::array kPolicies = {"銘柄選択", "分散投資", "流動性", "利回り水準", "リスク管理"};
constexpr std::array kNoiseMoods = {"方向感に乏しい", "振れ幅の大きい", "一進一退の"};

template <typename T, size_t N>
const T& Pick(DeterministicRng& rng, const std::array<T, N>& items) {
  return items[rng.Below(N)];
}

std::string_view AssetWord(AssetClass a) {
  switch (a) {
    case AssetClass::kStock: return "株式";
    case AssetClass::kBond: return "債券";
    case AssetClass::kRealEstate: return "リート";
    case AssetClass::kAssetCombination: return "株式・債券";
    case AssetClass::kOther: return "商品";
  }
  return "商品";
}

std::string Market(DeterministicRng& rng, const FundMeta& fund) {
  std::string place;
  switch (fund.region) {
    case Region::kDomestic: place = Pick(rng, kDomesticPlaces); break;
    case Region::kForeign: place = Pick(rng, kForeignPlaces); break;
    case Region::kDomesticForeign:
      place = rng.Below(2) == 0 ? Pick(rng, kDomesticPlaces) : Pick(rng, kForeignPlaces);
      break;
  }
  return place + std::string(AssetWord(fund.asset_class)) + "市場";
}

std::string KeySentence(DeterministicRng& rng, const FundMeta& fund, unsigned month,
                        const char* cause) {
  const std::string market = Market(rng, fund);
  const std::string dir = Pick(rng, kDirections);
  const std::string m = std::to_string(month) + "月";
  switch (rng.Below(3)) {
    case 0: return m + "の" + market + "は、" + cause + "を背景に" + dir + "しました。";
    case 1: return std::string(cause) + "を受けて、" + m + "の" + market + "は" + dir + "しました。";
    default: return m + "は" + cause + "から、" + market + "は" + dir + "する展開となりました。";
  }
}

std::string FillerSentence(DeterministicRng& rng, size_t kind) {
  // Draws are sequenced explicitly: operand order within `+` is unspecified.
  switch (kind) {
    case 0: {
      const std::string amount = std::to_string(10 + rng.Below(990));
      const char* move = rng.Below(2) == 0 ? "値上がり" : "値下がり";
      return "当ファンドの基準価額は、前月末比" + amount + "円の" + move + "となりました。";
    }
    case 1: {
      const std::string sector = Pick(rng, kSectors);
      const char* change = rng.Below(2) == 0 ? "引き上げ" : "引き下げ";
      return sector + "セクターの組入比率を" + change + "ました。";
    }
    case 2:
      return "組入銘柄数は月末時点で" + std::to_string(20 + rng.Below(180)) + "銘柄となっています。";
    case 3:
      return "今後も" + std::string(Pick(rng, kPolicies)) + "を重視した運用を行ってまいります。";
    default:
      return "当月の分配金は1万口当たり" + std::to_string(5 * (1 + rng.Below(40))) + "円としました。";
  }
}

std::chrono::year_month_day MonthEnd(int year, unsigned month) {
  const std::chrono::year_month_day_last last{std::chrono::year{year} / std::chrono::month{month} /
                                              std::chrono::last};
  return std::chrono::year_month_day{last};
}

}  // namespace

SyntheticCorpus GenerateSynthetic(const SyntheticOptions& options) {
  if (options.monthlies_per_group == 0 || options.monthlies_per_group > 12) {
    throw Error(ErrorCode::kBadConfig, "monthlies per group must be in [1, 12]");
  }
  constexpr size_t kFillerKinds = 5;
  if (options.filler_sentences > kFillerKinds) {
    throw Error(ErrorCode::kBadConfig, "at most 5 filler sentences per monthly");
  }
  DeterministicRng rng(options.seed);
  SyntheticCorpus corpus;
  for (size_t f = 0; f < options.funds; ++f) {
    char fund_id[16];
    std::snprintf(fund_id, sizeof(fund_id), "F%04zu", f + 1);
    FundMeta fund{fund_id, kAllAssetClasses[rng.Below(kAllAssetClasses.size())],
                  kAllRegions[rng.Below(kAllRegions.size())]};
    const int year = 2015 + static_cast<int>(rng.Below(8));
    const bool second_half = options.monthlies_per_group <= 6 && rng.Below(2) == 1;
    const unsigned first_month = second_half ? 7u : 1u;
    const std::string period = std::to_string(year) + (second_half ? "H2" : "H1");
    const std::string prefix = std::string(fund_id) + "-" + period;

    std::vector<size_t> causes(kCauses.size());
    for (size_t i = 0; i < causes.size(); ++i) causes[i] = i;
    rng.Shuffle(std::span<size_t>(causes));

    std::string investment_text;
    std::chrono::year_month_day last_date{};
    for (size_t m = 0; m < options.monthlies_per_group; ++m) {
      const unsigned month = first_month + static_cast<unsigned>(m);
      const std::string key = KeySentence(rng, fund, month, kCauses[causes[m % causes.size()]]);

      std::vector<size_t> kinds(kFillerKinds);
      for (size_t i = 0; i < kinds.size(); ++i) kinds[i] = i;
      rng.Shuffle(std::span<size_t>(kinds));
      std::vector<std::string> sentences;
      for (size_t i = 0; i < options.filler_sentences; ++i) {
        sentences.push_back(FillerSentence(rng, kinds[i]));
      }
      const size_t key_pos = rng.Below(sentences.size() + 1);
      sentences.insert(sentences.begin() + static_cast<ptrdiff_t>(key_pos), key);

      ReportDocument doc;
      doc.doc_id = prefix + "-M" + std::to_string(m + 1);
      doc.fund = fund;
      doc.kind = DocKind::kMonthly;
      doc.period_key = period;
      doc.date = MonthEnd(year, month);
      for (const std::string& s : sentences) doc.text += s;
      corpus.key_sentences.emplace(doc.doc_id, key_pos);
      corpus.documents.push_back(std::move(doc));

      investment_text += key;
      last_date = MonthEnd(year, month);
    }
    if (rng.Uniform() < options.noise_probability) {
      const std::string market = Market(rng, fund);
      const std::string mood = Pick(rng, kNoiseMoods);
      const std::string noise = "期を通じてみると、" + market + "は" + mood + "値動きとなりました。";
      if (rng.Below(2) == 0) {
        investment_text = noise + investment_text;
      } else {
        investment_text += noise;
      }
    }

    ReportDocument inv;
    inv.doc_id = prefix + "-INV";
    inv.fund = fund;
    inv.kind = DocKind::kInvestment;
    inv.period_key = period;
    inv.date = last_date;
    inv.text = std::move(investment_text);
    corpus.documents.push_back(std::move(inv));
  }
  return corpus;
}

void WriteTruth(const std::set<SentenceId>& keys, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  for (const auto& [doc_id, index] : keys) {
    nlohmann::ordered_json j;
    j["doc_id"] = doc_id;
    j["index"] = index;
    out << j.dump() << '\n';
  }
}

std::set<SentenceId> ReadTruth(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingArtifact, "ground truth " + path.string());
  std::set<SentenceId> keys;
  std::string line;
  while (std::getline(in, line)) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("doc_id") || !j.contains("index")) {
      throw Error(ErrorCode::kMalformedLine, path.string());
    }
    keys.emplace(j["doc_id"].get<std::string>(), j["index"].get<size_t>());
  }
  return keys;
}

double LabelingAccuracy(std::span<const LabeledSentence> labels, const std::set<SentenceId>& keys) {
  if (labels.empty()) return 0.0;
  size_t correct = 0;
  for (const LabeledSentence& l : labels) {
    const bool is_key = keys.count({l.sentence.source_doc, l.sentence.index}) > 0;
    if (is_key == l.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

}  // namespace repsumm
