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

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "repsumm/corpus.h"
#include "test_support.h"

namespace repsumm {
namespace {

using testing::Doc;
using testing::MakeGroup;
using testing::Ymd;

std::string Line(const std::string& id, const std::string& asset = "stock",
                 const std::string& kind = "monthly", const std::string& date = "2020-01-31",
                 const std::string& text = "text。") {
  return R"({"doc_id":")" + id + R"(","fund_id":"F1","asset_class":")" + asset +
         R"(","region":"domestic","kind":")" + kind + R"(","period_key":"2020H1","date":")" +
         date + R"(","text":")" + text + "\"}\n";
}

std::vector<ReportGroup> Groups(size_t n) {
  std::vector<ReportGroup> groups;
  for (size_t i = 0; i < n; ++i) {
    groups.push_back(MakeGroup("F" + std::to_string(i), "P", "inv", {"a。", "b。"}));
  }
  return groups;
}

std::set<std::string> Ids(const std::vector<ReportGroup>& groups) {
  std::set<std::string> ids;
  for (const ReportGroup& g : groups) {
    ids.insert(g.investment.doc_id);
    for (const ReportDocument& m : g.monthlies) ids.insert(m.doc_id);
  }
  return ids;
}

TEST_CASE("ParseCorpus keeps file order") {
  std::istringstream in(Line("B") + Line("A"));
  const auto docs = ParseCorpus(in);
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].doc_id == "B");
  CHECK(docs[1].doc_id == "A");
  CHECK(docs[0].fund.asset_class == AssetClass::kStock);
  CHECK(docs[0].date == Ymd(2020, 1, 31));
}

TEST_CASE("ParseCorpus rejects bad input") {
  SUBCASE("unknown asset class") {
    std::istringstream in(Line("A", "equity"));
    CHECK_ERROR_CODE(ParseCorpus(in), ErrorCode::kSchemaViolation);
  }
  SUBCASE("duplicate id") {
    std::istringstream in(Line("A") + Line("A"));
    CHECK_ERROR_CODE(ParseCorpus(in), ErrorCode::kDuplicateId);
  }
  SUBCASE("not json") {
    std::istringstream in(Line("A") + "{oops\n");
    try {
      ParseCorpus(in);
      FAIL("no throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kMalformedLine);
      CHECK(e.detail().find("line 2") != std::string::npos);
    }
  }
  SUBCASE("bad date") {
    std::istringstream in(Line("A", "stock", "monthly", "2020-02-30"));
    CHECK_ERROR_CODE(ParseCorpus(in), ErrorCode::kSchemaViolation);
  }
  SUBCASE("blank text") {
    std::istringstream in(Line("A", "stock", "monthly", "2020-01-31", "  "));
    CHECK_ERROR_CODE(ParseCorpus(in), ErrorCode::kSchemaViolation);
  }
  SUBCASE("missing field names the field") {
    std::istringstream in(R"({"doc_id":"A"})" "\n");
    try {
      ParseCorpus(in);
      FAIL("no throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kSchemaViolation);
      CHECK(e.detail().find("fund_id") != std::string::npos);
    }
  }
}

TEST_CASE("Ingest of a missing file is an I/O error") {
  CHECK_ERROR_CODE(Ingest("/nonexistent/corpus.jsonl"), ErrorCode::kIoError);
}

TEST_CASE("serialize then parse is the identity") {
  std::mt19937 rng(3);
  const std::vector<std::string> texts = {"a", "金利が低下。", "x \"quoted\" \\ y", "改行\nあり",
                                          "tab\there"};
  for (int round = 0; round < 20; ++round) {
    std::vector<ReportDocument> docs;
    const size_t n = 1 + rng() % 8;
    for (size_t i = 0; i < n; ++i) {
      docs.push_back(Doc("d" + std::to_string(i), "F" + std::to_string(rng() % 3),
                         rng() % 2 ? DocKind::kMonthly : DocKind::kInvestment,
                         "P" + std::to_string(rng() % 2), Ymd(2000 + rng() % 30, 1 + rng() % 12, 1 + rng() % 28),
                         texts[rng() % texts.size()], kAllAssetClasses[rng() % 5],
                         kAllRegions[rng() % 3]));
    }
    std::stringstream ss;
    SerializeCorpus(docs, ss);
    CHECK(ParseCorpus(ss) == docs);
  }
}

TEST_CASE("serialized keys follow the schema order") {
  std::stringstream ss;
  const std::vector<ReportDocument> docs = {
      Doc("A", "F1", DocKind::kMonthly, "2020H1", Ymd(2020, 1, 31), "text。")};
  SerializeCorpus(docs, ss);
  CHECK(ss.str() == Line("A"));
}

TEST_CASE("Group builds date-sorted groups") {
  std::vector<ReportDocument> docs;
  docs.push_back(Doc("I", "F1", DocKind::kInvestment, "K", Ymd(2020, 6, 30), "inv"));
  for (unsigned m : {6u, 2u, 4u, 1u, 5u, 3u}) {
    docs.push_back(Doc("M" + std::to_string(m), "F1", DocKind::kMonthly, "K", Ymd(2020, m, 28), "x"));
  }
  const auto groups = Group(docs);
  REQUIRE(groups.size() == 1);
  REQUIRE(groups[0].monthlies.size() == 6);
  for (size_t i = 0; i < 6; ++i) {
    CHECK(groups[0].monthlies[i].doc_id == "M" + std::to_string(i + 1));
  }
}

TEST_CASE("Group breaks date ties by doc id") {
  std::vector<ReportDocument> docs = {
      Doc("I", "F1", DocKind::kInvestment, "K", Ymd(2020, 6, 30), "inv"),
      Doc("b", "F1", DocKind::kMonthly, "K", Ymd(2020, 1, 31), "x"),
      Doc("a", "F1", DocKind::kMonthly, "K", Ymd(2020, 1, 31), "x")};
  const auto groups = Group(docs);
  CHECK(groups[0].monthlies[0].doc_id == "a");
}

TEST_CASE("Group error paths") {
  SUBCASE("orphan monthlies") {
    std::vector<ReportDocument> docs = {
        Doc("M", "F1", DocKind::kMonthly, "K", Ymd(2020, 1, 31), "x")};
    CHECK_ERROR_CODE(Group(docs), ErrorCode::kOrphanMonthlies);
  }
  SUBCASE("duplicate investment") {
    std::vector<ReportDocument> docs = {
        Doc("I1", "F1", DocKind::kInvestment, "K", Ymd(2020, 6, 30), "x"),
        Doc("I2", "F1", DocKind::kInvestment, "K", Ymd(2020, 6, 30), "y"),
        Doc("M", "F1", DocKind::kMonthly, "K", Ymd(2020, 1, 31), "x")};
    CHECK_ERROR_CODE(Group(docs), ErrorCode::kDuplicateInvestment);
  }
  SUBCASE("investment without monthlies") {
    std::vector<ReportDocument> docs = {
        Doc("I", "F1", DocKind::kInvestment, "K", Ymd(2020, 6, 30), "x")};
    CHECK_ERROR_CODE(Group(docs), ErrorCode::kEmptyGroup);
  }
  SUBCASE("fund metadata disagrees within a group") {
    std::vector<ReportDocument> docs = {
        Doc("I", "F1", DocKind::kInvestment, "K", Ymd(2020, 6, 30), "x", AssetClass::kBond),
        Doc("M", "F1", DocKind::kMonthly, "K", Ymd(2020, 1, 31), "x", AssetClass::kStock)};
    CHECK_ERROR_CODE(Group(docs), ErrorCode::kInconsistentFund);
  }
}

TEST_CASE("Split sizes and determinism") {
  const auto groups = Groups(10);
  const DatasetSplit a = Split(groups, {}, 42);
  CHECK(a.train.size() == 7);
  CHECK(a.validation.size() == 1);
  CHECK(a.test.size() == 2);
  const DatasetSplit b = Split(groups, {}, 42);
  CHECK(Ids(a.train) == Ids(b.train));
  CHECK(Ids(a.test) == Ids(b.test));
  CHECK(a.seed == 42);
}

TEST_CASE("Split rejects bad ratios") {
  const auto groups = Groups(4);
  CHECK_ERROR_CODE(Split(groups, {0.5, 0.5, 0.5}, 1), ErrorCode::kBadRatios);
  CHECK_ERROR_CODE(Split(groups, {1.2, -0.1, -0.1}, 1), ErrorCode::kBadRatios);
}

TEST_CASE("SplitSizes floors validation and test") {
  using A = std::array<size_t, 3>;
  CHECK(SplitSizes(0, {}) == A{0, 0, 0});
  CHECK(SplitSizes(9, {}) == A{8, 0, 1});
  CHECK(SplitSizes(30, {}) == A{21, 3, 6});
  CHECK(SplitSizes(50, {}) == A{35, 5, 10});
}

TEST_CASE("split partitions groups without leakage") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 50; ++round) {
    const size_t n = rng() % 40;
    const auto groups = Groups(n);
    const DatasetSplit s = Split(groups, {}, rng());
    const auto tr = Ids(s.train), va = Ids(s.validation), te = Ids(s.test);
    std::set<std::string> all = tr;
    all.insert(va.begin(), va.end());
    all.insert(te.begin(), te.end());
    CHECK(all == Ids(groups));
    CHECK(all.size() == tr.size() + va.size() + te.size());
  }
}

TEST_CASE("split file round trip") {
  testing::TempDir dir;
  const auto groups = Groups(12);
  const DatasetSplit s = Split(groups, {}, 5);
  WriteSplit(s, {}, dir / "split.json");
  const DatasetSplit loaded = LoadSplit(dir / "split.json", groups);
  CHECK(Ids(loaded.train) == Ids(s.train));
  CHECK(Ids(loaded.validation) == Ids(s.validation));
  CHECK(Ids(loaded.test) == Ids(s.test));
  CHECK(loaded.seed == 5);
  CHECK_ERROR_CODE(LoadSplit(dir / "missing.json", groups), ErrorCode::kMissingArtifact);

  const auto fewer = Groups(3);
  CHECK_ERROR_CODE(LoadSplit(dir / "split.json", fewer), ErrorCode::kSchemaViolation);
}

TEST_CASE("ISO dates") {
  CHECK(ParseIsoDate("2020-02-29") == Ymd(2020, 2, 29));
  CHECK_FALSE(ParseIsoDate("2021-02-29"));
  CHECK_FALSE(ParseIsoDate("2020-1-31"));
  CHECK_FALSE(ParseIsoDate("2020-01-31T00:00"));
  CHECK(FormatIsoDate(Ymd(999, 3, 4)) == "0999-03-04");
}

}  // namespace
}  // namespace repsumm
