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

#include "repsumm/labeling.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "json.hpp"
#include "repsumm/error.h"

namespace repsumm {
namespace {

using ordered_json = nlohmann::ordered_json;

// Documents sampled for automatic tokenizer selection.
constexpr size_t kTokenizerSampleDocs = 64;

void ApplyTopFraction(double fraction, std::vector<LabeledSentence>& records) {
  const size_t n = records.size();
  const auto k = static_cast<size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return records[a].max_similarity > records[b].max_similarity;
  });
  for (size_t r = 0; r < n; ++r) records[order[r]].label = r < k;
}

std::vector<LabeledSentence> LabelGroups(std::span<const ReportGroup> groups,
                                         const LabelingConfig& config,
                                         const TfidfModel& features,
                                         const ModelServiceClient* embedder) {
  std::vector<LabeledSentence> out;
  for (const ReportGroup& group : groups) {
    try {
      std::vector<LabeledSentence> labeled;
      if (config.backend == LabelingBackend::kTfidf) {
        labeled = LabelGroup(group, config,
                             [&](std::string_view text) { return features.Transform(text); });
      } else {
        std::vector<std::string> texts;
        for (const Sentence& s : SegmentDocument(group.investment, config.segment)) {
          texts.push_back(s.text);
        }
        for (const ReportDocument& m : group.monthlies) {
          for (const Sentence& s : SegmentDocument(m, config.segment)) texts.push_back(s.text);
        }
        Embeddings emb = embedder->Embed(texts);
        std::unordered_map<std::string, TermVector> cache;
        for (size_t i = 0; i < texts.size(); ++i) cache.emplace(texts[i], emb.vectors[i]);
        labeled = LabelGroup(group, config, [&](std::string_view text) {
          return cache.at(std::string(text));
        });
      }
      out.insert(out.end(), std::make_move_iterator(labeled.begin()),
                 std::make_move_iterator(labeled.end()));
    } catch (const Error& e) {
      throw Error(e.code(), "group " + group.key().ToString() + ": " + e.detail());
    }
  }
  return out;
}

}  // namespace

std::string_view ToString(LabelingBackend backend) {
  return backend == LabelingBackend::kTfidf ? "tfidf" : "remote";
}

std::optional<LabelingBackend> ParseLabelingBackend(std::string_view name) {
  if (name == "tfidf") return LabelingBackend::kTfidf;
  if (name == "remote") return LabelingBackend::kRemoteEmbedding;
  return std::nullopt;
}

void LabelingConfig::Validate() const {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw Error(ErrorCode::kBadConfig, "tau must lie in [0, 1], got " + std::to_string(tau));
  }
  if (top_fraction && !(*top_fraction >= 0.0 && *top_fraction <= 1.0)) {
    throw Error(ErrorCode::kBadConfig,
                "top_fraction must lie in [0, 1], got " + std::to_string(*top_fraction));
  }
}

std::vector<LabeledSentence> LabelGroup(const ReportGroup& group, const LabelingConfig& config,
                                        const VectorFn& vector_fn) {
  config.Validate();
  const std::vector<Sentence> refs = SegmentDocument(group.investment, config.segment);
  if (refs.empty()) {
    throw Error(ErrorCode::kEmptyInvestment, group.investment.doc_id + " has no sentences");
  }
  std::vector<TermVector> ref_vectors;
  ref_vectors.reserve(refs.size());
  for (const Sentence& r : refs) ref_vectors.push_back(vector_fn(r.text));

  std::vector<const ReportDocument*> monthlies;
  for (const ReportDocument& m : group.monthlies) monthlies.push_back(&m);
  std::stable_sort(monthlies.begin(), monthlies.end(),
                   [](const ReportDocument* a, const ReportDocument* b) {
                     return a->date != b->date ? a->date < b->date : a->doc_id < b->doc_id;
                   });

  std::vector<LabeledSentence> out;
  const GroupKey key = group.key();
  for (const ReportDocument* m : monthlies) {
    for (Sentence& s : SegmentDocument(*m, config.segment)) {
      const TermVector v = vector_fn(s.text);
      LabeledSentence rec;
      rec.group_key = key;
      rec.max_similarity = Cosine(v, ref_vectors[0]);
      rec.argmax_ref_index = 0;
      for (size_t r = 1; r < ref_vectors.size(); ++r) {
        const double sim = Cosine(v, ref_vectors[r]);
        if (sim > rec.max_similarity) {
          rec.max_similarity = sim;
          rec.argmax_ref_index = r;
        }
      }
      rec.label = rec.max_similarity >= config.tau;
      rec.sentence = std::move(s);
      out.push_back(std::move(rec));
    }
  }
  if (config.top_fraction) ApplyTopFraction(*config.top_fraction, out);
  return out;
}

std::vector<std::string> TrainingSentences(std::span<const ReportGroup> groups,
                                           const SegmentOptions& options) {
  std::vector<std::string> texts;
  for (const ReportGroup& g : groups) {
    for (const ReportDocument& m : g.monthlies) {
      for (Sentence& s : SegmentDocument(m, options)) texts.push_back(std::move(s.text));
    }
    for (Sentence& s : SegmentDocument(g.investment, options)) texts.push_back(std::move(s.text));
  }
  return texts;
}

Tokenizer ResolveTokenizer(const LabelingConfig& config, std::span<const ReportGroup> groups) {
  if (config.tokenizer) return *config.tokenizer;
  std::string sample;
  size_t docs = 0;
  for (const ReportGroup& g : groups) {
    if (docs >= kTokenizerSampleDocs) break;
    sample += g.investment.text;
    sample += '\n';
    ++docs;
  }
  return Tokenizer::ForText(sample, 2);
}

TrainingSet BuildTrainingSet(const DatasetSplit& split, const LabelingConfig& config,
                             const ModelServiceClient* embedder) {
  config.Validate();
  if (config.backend == LabelingBackend::kRemoteEmbedding && embedder == nullptr) {
    throw Error(ErrorCode::kBadConfig, "remote labeling backend needs an embedding client");
  }
  if (split.train.empty()) throw Error(ErrorCode::kEmptyCorpus, "training split has no groups");
  const Tokenizer tokenizer = ResolveTokenizer(config, split.train);
  TrainingSet set{{}, {}, TfidfModel::Fit(tokenizer, TrainingSentences(split.train, config.segment))};
  set.train = LabelGroups(split.train, config, set.features, embedder);
  set.validation = LabelGroups(split.validation, config, set.features, embedder);
  return set;
}

void WriteLabels(std::span<const LabeledSentence> labels, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  for (const LabeledSentence& l : labels) {
    ordered_json j;
    j["doc_id"] = l.sentence.source_doc;
    j["index"] = l.sentence.index;
    j["group_key"] = {{"fund_id", l.group_key.fund_id}, {"period_key", l.group_key.period_key}};
    j["text"] = l.sentence.text;
    j["label"] = l.label;
    j["max_similarity"] = l.max_similarity;
    j["argmax_ref_index"] = l.argmax_ref_index;
    out << j.dump(-1, ' ', false, ordered_json::error_handler_t::replace) << '\n';
  }
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

std::vector<LabeledSentence> ReadLabels(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingArtifact, "labels " + path.string());
  std::vector<LabeledSentence> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    const bool ok = !j.is_discarded() && j.is_object() && j.contains("doc_id") &&
                    j.contains("index") && j.contains("text") && j.contains("label") &&
                    j.contains("group_key");
    if (!ok) {
      throw Error(ErrorCode::kMalformedLine,
                  path.string() + ": line " + std::to_string(line_no));
    }
    LabeledSentence l;
    l.sentence.source_doc = j["doc_id"].get<std::string>();
    l.sentence.index = j["index"].get<size_t>();
    l.sentence.text = j["text"].get<std::string>();
    l.group_key.fund_id = j["group_key"].value("fund_id", "");
    l.group_key.period_key = j["group_key"].value("period_key", "");
    l.label = j["label"].get<bool>();
    l.max_similarity = j.value("max_similarity", 0.0);
    l.argmax_ref_index = j.value("argmax_ref_index", size_t{0});
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace repsumm
