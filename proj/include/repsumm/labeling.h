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

#ifndef REPSUMM_LABELING_H_
#define REPSUMM_LABELING_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "repsumm/corpus.h"
#include "repsumm/service_client.h"
#include "repsumm/textproc.h"

namespace repsumm {

enum class LabelingBackend { kTfidf, kRemoteEmbedding };

std::string_view ToString(LabelingBackend backend);
std::optional<LabelingBackend> ParseLabelingBackend(std::string_view name);

struct LabelingConfig {
  LabelingBackend backend = LabelingBackend::kTfidf;
  // A sentence is positive when its best similarity is >= tau.
  double tau = 0.6;
  // When set, the top fraction of each group's sentences by similarity is
  // labeled positive instead (ties by chronological order) and tau is unused.
  std::optional<double> top_fraction;
  // nullopt picks char bigrams for CJK text and whitespace tokens otherwise.
  std::optional<Tokenizer> tokenizer;
  SegmentOptions segment;

  // Throws BadConfig when tau or top_fraction lie outside [0, 1].
  void Validate() const;
};

// A monthly-report sentence with its best match in the investment report.
struct LabeledSentence {
  Sentence sentence;
  GroupKey group_key;
  bool label = false;
  double max_similarity = 0.0;
  size_t argmax_ref_index = 0;
};

using VectorFn = std::function<TermVector(std::string_view)>;

// Labels every monthly sentence of `group` against the sentences of its
// investment report. Output is in (monthly date, sentence index) order.
// Throws EmptyInvestment when the investment report has no sentences.
std::vector<LabeledSentence> LabelGroup(const ReportGroup& group, const LabelingConfig& config,
                                        const VectorFn& vector_fn);

struct TrainingSet {
  std::vector<LabeledSentence> train;
  std::vector<LabeledSentence> validation;
  // Fitted on every train-split sentence (monthly and investment). Always
  // present: the remote backend still needs it as scorer features.
  TfidfModel features;
};

// Sentence population the feature model is fitted on: for each group, its
// monthlies' sentences in date order, then the investment report's.
std::vector<std::string> TrainingSentences(std::span<const ReportGroup> groups,
                                           const SegmentOptions& options = {});

// Tokenizer from the config, or auto-selected from the groups' text.
Tokenizer ResolveTokenizer(const LabelingConfig& config, std::span<const ReportGroup> groups);

// Fits features on the train split and labels the train and validation
// groups. The remote backend requires `embedder`. Errors are rethrown with
// the failing group's key prepended.
TrainingSet BuildTrainingSet(const DatasetSplit& split, const LabelingConfig& config,
                             const ModelServiceClient* embedder = nullptr);

// JSONL: {doc_id, index, group_key, text, label, max_similarity, argmax_ref_index}.
void WriteLabels(std::span<const LabeledSentence> labels, const std::filesystem::path& path);
std::vector<LabeledSentence> ReadLabels(const std::filesystem::path& path);

}  // namespace repsumm

#endif  // REPSUMM_LABELING_H_
