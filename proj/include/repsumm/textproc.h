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

#ifndef REPSUMM_TEXTPROC_H_
#define REPSUMM_TEXTPROC_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "repsumm/corpus.h"

namespace repsumm {

// A sentence of a source document. `date` is the source document's date and
// only serves chronological ordering; it is default for free text.
struct Sentence {
  std::string text;
  std::string source_doc;
  size_t index = 0;
  std::chrono::year_month_day date{};

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// Orders sentences chronologically: (date, source_doc, index).
bool ChronologicallyBefore(const Sentence& a, const Sentence& b);

struct SegmentOptions {
  // CJK terminators end a sentence unconditionally; Latin ones only when
  // followed by whitespace or end of text, so "3.5%" stays whole.
  std::u32string terminators = U"。．！？.!?";
};

std::vector<Sentence> Segment(std::string_view text, const SegmentOptions& options = {});
std::vector<Sentence> SegmentDocument(const ReportDocument& doc,
                                      const SegmentOptions& options = {});

// A token with its byte span in the tokenized text. For character n-grams
// the span runs from the first to the last code point of the n-gram, and so
// may contain whitespace that was skipped.
struct Term {
  std::string text;
  size_t begin = 0;
  size_t end = 0;
};

class Tokenizer {
 public:
  enum class Mode { kWhitespace, kCharNgram };

  static Tokenizer Whitespace() { return Tokenizer(Mode::kWhitespace, 1); }
  // Throws BadConfig for n < 1.
  static Tokenizer CharNgram(int n);
  // CharNgram(cjk_n) when more than half of the visible code points of
  // `sample` are CJK, Whitespace otherwise.
  static Tokenizer ForText(std::string_view sample, int cjk_n);
  // "whitespace" or "charN".
  static std::optional<Tokenizer> Parse(std::string_view name);

  Mode mode() const { return mode_; }
  int n() const { return n_; }
  std::string Name() const;

  std::vector<std::string> Tokenize(std::string_view text) const;
  std::vector<Term> TokenizeWithSpans(std::string_view text) const;
  size_t CountTerms(std::string_view text) const;

  // Separator placed between sentences when building summaries: none for
  // character n-grams (CJK terminators close each sentence), a space for
  // whitespace tokens so adjacent sentences do not fuse.
  std::string_view SentenceJoiner() const { return mode_ == Mode::kWhitespace ? " " : ""; }

  friend bool operator==(const Tokenizer&, const Tokenizer&) = default;

 private:
  Tokenizer(Mode mode, int n) : mode_(mode), n_(n) {}

  Mode mode_;
  int n_;
};

// Sparse vector: entries sorted by column, no explicit zeros, all < dim.
struct TermVector {
  std::vector<std::pair<uint32_t, double>> entries;
  size_t dim = 0;

  static TermVector FromDense(std::span<const double> values);
  double Norm() const;
  bool IsZero() const { return entries.empty(); }
  TermVector Scaled(double factor) const;
};

// Throws DimMismatch when dims differ.
double Dot(const TermVector& a, const TermVector& b);

// dot / (|a| |b|), clamped to [-1, 1]; 0 when either vector is zero.
// Throws DimMismatch when dims differ.
double Cosine(const TermVector& a, const TermVector& b);

// TFIDF with raw term counts, smoothed idf ln((1 + N) / (1 + df)) + 1 and
// L2-normalized output. Immutable after Fit; safe to share across threads.
class TfidfModel {
 public:
  // Columns are assigned in first-occurrence order. Throws EmptyCorpus.
  static TfidfModel Fit(const Tokenizer& tokenizer, std::span<const std::string> docs);

  TermVector Transform(std::string_view text) const;

  const Tokenizer& tokenizer() const { return tokenizer_; }
  size_t dim() const { return terms_.size(); }
  size_t n_docs() const { return n_docs_; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<double>& idf() const { return idf_; }
  std::optional<size_t> Column(std::string_view term) const;
  // Idf of an in-vocabulary term; nullopt otherwise.
  std::optional<double> Idf(std::string_view term) const;

  // Stable digest of tokenizer, vocabulary and idf table.
  std::string Fingerprint() const;

  std::string ToJsonString() const;
  static TfidfModel FromJsonString(std::string_view json);
  void Save(const std::filesystem::path& path) const;
  // Throws MissingArtifact when the file does not exist.
  static TfidfModel Load(const std::filesystem::path& path);

 private:
  TfidfModel(Tokenizer tokenizer, std::vector<std::string> terms,
             std::vector<double> idf, size_t n_docs);

  Tokenizer tokenizer_;
  std::vector<std::string> terms_;
  std::vector<double> idf_;
  size_t n_docs_ = 0;
  std::unordered_map<std::string, uint32_t> columns_;
};

}  // namespace repsumm

#endif  // REPSUMM_TEXTPROC_H_
