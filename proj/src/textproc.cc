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

#include "repsumm/textproc.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "repsumm/error.h"
#include "repsumm/fingerprint.h"
#include "repsumm/utf8.h"

namespace repsumm {
namespace {

bool IsClosingMark(char32_t c) {
  switch (c) {
    case U'」': case U'』': case U'）': case U'】': case U'〉': case U'》':
    case U'］': case U'”': case U'’': case U')': case U']': case U'"': case U'\'':
      return true;
    default:
      return false;
  }
}

void EmitSentence(std::string_view text, size_t begin, size_t end,
                  std::vector<Sentence>& out) {
  std::string_view piece = utf8::TrimSpace(text.substr(begin, end - begin));
  if (piece.empty()) return;
  Sentence s;
  s.text = std::string(piece);
  s.index = out.size();
  out.push_back(std::move(s));
}

}  // namespace

bool ChronologicallyBefore(const Sentence& a, const Sentence& b) {
  if (a.date != b.date) return a.date < b.date;
  if (a.source_doc != b.source_doc) return a.source_doc < b.source_doc;
  return a.index < b.index;
}

std::vector<Sentence> Segment(std::string_view text, const SegmentOptions& options) {
  const std::vector<utf8::CodePoint> cps = utf8::Decode(text);
  auto is_terminator = [&](char32_t c) {
    return options.terminators.find(c) != std::u32string::npos;
  };

  std::vector<Sentence> out;
  size_t start = 0;
  size_t i = 0;
  while (i < cps.size()) {
    if (!is_terminator(cps[i].value)) {
      ++i;
      continue;
    }
    bool unconditional = false;
    size_t j = i;
    while (j < cps.size() && (is_terminator(cps[j].value) || (j > i && IsClosingMark(cps[j].value)))) {
      if (is_terminator(cps[j].value) && utf8::IsCjk(cps[j].value)) unconditional = true;
      ++j;
    }
    const bool boundary = unconditional || j == cps.size() || utf8::IsSpace(cps[j].value);
    if (boundary) {
      const size_t end = j == cps.size() ? text.size() : cps[j].offset;
      EmitSentence(text, start, end, out);
      start = end;
    }
    i = j;
  }
  if (start < text.size()) EmitSentence(text, start, text.size(), out);
  return out;
}

std::vector<Sentence> SegmentDocument(const ReportDocument& doc,
                                      const SegmentOptions& options) {
  std::vector<Sentence> sentences = Segment(doc.text, options);
  for (Sentence& s : sentences) {
    s.source_doc = doc.doc_id;
    s.date = doc.date;
  }
  return sentences;
}

Tokenizer Tokenizer::CharNgram(int n) {
  if (n < 1) {
    throw Error(ErrorCode::kBadConfig, "character n-gram order must be >= 1, got " +
                                           std::to_string(n));
  }
  return Tokenizer(Mode::kCharNgram, n);
}

Tokenizer Tokenizer::ForText(std::string_view sample, int cjk_n) {
  return utf8::CjkRatio(sample) > 0.5 ? CharNgram(cjk_n) : Whitespace();
}

std::optional<Tokenizer> Tokenizer::Parse(std::string_view name) {
  if (name == "whitespace") return Whitespace();
  if (name.size() > 4 && name.substr(0, 4) == "char") {
    int n = 0;
    const char* first = name.data() + 4;
    const char* last = name.data() + name.size();
    auto [ptr, ec] = std::from_chars(first, last, n);
    if (ec == std::errc() && ptr == last && n >= 1) return CharNgram(n);
  }
  return std::nullopt;
}

std::string Tokenizer::Name() const {
  return mode_ == Mode::kWhitespace ? "whitespace" : "char" + std::to_string(n_);
}

std::vector<Term> Tokenizer::TokenizeWithSpans(std::string_view text) const {
  const std::vector<utf8::CodePoint> cps = utf8::Decode(text);
  std::vector<Term> terms;
  if (mode_ == Mode::kWhitespace) {
    size_t i = 0;
    while (i < cps.size()) {
      while (i < cps.size() && utf8::IsSpace(cps[i].value)) ++i;
      if (i == cps.size()) break;
      const size_t begin = cps[i].offset;
      while (i < cps.size() && !utf8::IsSpace(cps[i].value)) ++i;
      const size_t end = i == cps.size() ? text.size() : cps[i].offset;
      terms.push_back({std::string(text.substr(begin, end - begin)), begin, end});
    }
    return terms;
  }

  std::vector<utf8::CodePoint> visible;
  visible.reserve(cps.size());
  for (const utf8::CodePoint& cp : cps) {
    if (!utf8::IsSpace(cp.value)) visible.push_back(cp);
  }
  if (visible.empty()) return terms;
  const size_t n = static_cast<size_t>(n_);
  const size_t width = std::min(n, visible.size());
  const size_t count = visible.size() < n ? 1 : visible.size() - n + 1;
  terms.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    Term t;
    for (size_t k = i; k < i + width; ++k) {
      t.text.append(text.substr(visible[k].offset, visible[k].size));
    }
    t.begin = visible[i].offset;
    t.end = visible[i + width - 1].offset + visible[i + width - 1].size;
    terms.push_back(std::move(t));
  }
  return terms;
}

std::vector<std::string> Tokenizer::Tokenize(std::string_view text) const {
  std::vector<Term> spans = TokenizeWithSpans(text);
  std::vector<std::string> out;
  out.reserve(spans.size());
  for (Term& t : spans) out.push_back(std::move(t.text));
  return out;
}

size_t Tokenizer::CountTerms(std::string_view text) const {
  const std::vector<utf8::CodePoint> cps = utf8::Decode(text);
  if (mode_ == Mode::kWhitespace) {
    size_t runs = 0;
    bool in_run = false;
    for (const utf8::CodePoint& cp : cps) {
      const bool space = utf8::IsSpace(cp.value);
      if (!space && !in_run) ++runs;
      in_run = !space;
    }
    return runs;
  }
  size_t visible = 0;
  for (const utf8::CodePoint& cp : cps) {
    if (!utf8::IsSpace(cp.value)) ++visible;
  }
  if (visible == 0) return 0;
  const size_t n = static_cast<size_t>(n_);
  return visible < n ? 1 : visible - n + 1;
}

TermVector TermVector::FromDense(std::span<const double> values) {
  TermVector v;
  v.dim = values.size();
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) v.entries.emplace_back(static_cast<uint32_t>(i), values[i]);
  }
  return v;
}

double TermVector::Norm() const {
  double sum = 0.0;
  for (const auto& [col, w] : entries) sum += w * w;
  return std::sqrt(sum);
}

TermVector TermVector::Scaled(double factor) const {
  TermVector out;
  out.dim = dim;
  if (factor == 0.0) return out;
  out.entries.reserve(entries.size());
  for (const auto& [col, w] : entries) out.entries.emplace_back(col, w * factor);
  return out;
}

double Dot(const TermVector& a, const TermVector& b) {
  if (a.dim != b.dim) {
    throw Error(ErrorCode::kDimMismatch,
                std::to_string(a.dim) + " vs " + std::to_string(b.dim));
  }
  double sum = 0.0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      sum += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

double Cosine(const TermVector& a, const TermVector& b) {
  const double dot = Dot(a, b);
  const double na = a.Norm();
  const double nb = b.Norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (na * nb), -1.0, 1.0);
}

TfidfModel::TfidfModel(Tokenizer tokenizer, std::vector<std::string> terms,
                       std::vector<double> idf, size_t n_docs)
    : tokenizer_(tokenizer), terms_(std::move(terms)), idf_(std::move(idf)), n_docs_(n_docs) {
  columns_.reserve(terms_.size());
  for (size_t i = 0; i < terms_.size(); ++i) {
    columns_.emplace(terms_[i], static_cast<uint32_t>(i));
  }
}

TfidfModel TfidfModel::Fit(const Tokenizer& tokenizer, std::span<const std::string> docs) {
  if (docs.empty()) throw Error(ErrorCode::kEmptyCorpus, "no documents to fit TFIDF on");
  std::unordered_map<std::string, uint32_t> columns;
  std::vector<std::string> terms;
  std::vector<size_t> df;
  std::vector<size_t> last_doc;
  for (size_t d = 0; d < docs.size(); ++d) {
    for (std::string& term : tokenizer.Tokenize(docs[d])) {
      auto [it, inserted] = columns.try_emplace(term, static_cast<uint32_t>(terms.size()));
      if (inserted) {
        terms.push_back(std::move(term));
        df.push_back(0);
        last_doc.push_back(SIZE_MAX);
      }
      const uint32_t col = it->second;
      if (last_doc[col] != d) {
        last_doc[col] = d;
        ++df[col];
      }
    }
  }
  const double n = static_cast<double>(docs.size());
  std::vector<double> idf(terms.size());
  for (size_t i = 0; i < terms.size(); ++i) {
    idf[i] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[i]))) + 1.0;
  }
  return TfidfModel(tokenizer, std::move(terms), std::move(idf), docs.size());
}

TermVector TfidfModel::Transform(std::string_view text) const {
  std::vector<uint32_t> cols;
  for (const std::string& term : tokenizer_.Tokenize(text)) {
    auto it = columns_.find(term);
    if (it != columns_.end()) cols.push_back(it->second);
  }
  std::sort(cols.begin(), cols.end());
  TermVector v;
  v.dim = terms_.size();
  for (size_t i = 0; i < cols.size();) {
    size_t j = i;
    while (j < cols.size() && cols[j] == cols[i]) ++j;
    v.entries.emplace_back(cols[i], static_cast<double>(j - i) * idf_[cols[i]]);
    i = j;
  }
  const double norm = v.Norm();
  if (norm == 0.0) return v;
  for (auto& entry : v.entries) entry.second /= norm;
  return v;
}

std::optional<size_t> TfidfModel::Column(std::string_view term) const {
  auto it = columns_.find(std::string(term));
  if (it == columns_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> TfidfModel::Idf(std::string_view term) const {
  auto col = Column(term);
  if (!col) return std::nullopt;
  return idf_[*col];
}

std::string TfidfModel::Fingerprint() const { return repsumm::Fingerprint(ToJsonString()); }

std::string TfidfModel::ToJsonString() const {
  nlohmann::ordered_json j;
  j["tokenizer"] = tokenizer_.Name();
  j["n_docs"] = n_docs_;
  j["vocabulary"] = terms_;
  j["idf"] = idf_;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

TfidfModel TfidfModel::FromJsonString(std::string_view json) {
  nlohmann::json j = nlohmann::json::parse(json, nullptr, false);
  auto bad = [](const std::string& why) {
    return Error(ErrorCode::kSchemaViolation, "TFIDF model: " + why);
  };
  if (j.is_discarded() || !j.is_object()) throw bad("not a JSON object");
  if (!j.contains("tokenizer") || !j["tokenizer"].is_string()) throw bad("missing tokenizer");
  auto tokenizer = Tokenizer::Parse(j["tokenizer"].get<std::string>());
  if (!tokenizer) throw bad("unknown tokenizer");
  if (!j.contains("vocabulary") || !j.contains("idf") || !j.contains("n_docs")) {
    throw bad("missing vocabulary, idf or n_docs");
  }
  auto terms = j["vocabulary"].get<std::vector<std::string>>();
  auto idf = j["idf"].get<std::vector<double>>();
  if (terms.size() != idf.size()) throw bad("vocabulary and idf lengths differ");
  return TfidfModel(*tokenizer, std::move(terms), std::move(idf), j["n_docs"].get<size_t>());
}

void TfidfModel::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << ToJsonString() << '\n';
}

TfidfModel TfidfModel::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingArtifact, "TFIDF model " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return FromJsonString(buf.str());
}

}  // namespace repsumm
