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

#ifndef REPSUMM_EXTRACTOR_H_
#define REPSUMM_EXTRACTOR_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "repsumm/corpus.h"
#include "repsumm/labeling.h"
#include "repsumm/service_client.h"
#include "repsumm/textproc.h"

namespace repsumm {

struct TrainConfig {
  int epochs = 9;
  int batch_size = 4;
  double learning_rate = 0.1;
  double l2 = 1e-4;
  uint64_t seed = 0;

  // Throws BadConfig on non-positive epochs, batch size or learning rate,
  // or negative l2.
  void Validate() const;
};

// Logistic regression head over TFIDF features.
struct LinearScorer {
  std::vector<double> weights;
  double bias = 0.0;
  // Epochs run, and the 1-based epoch whose parameters were kept.
  int trained_epochs = 0;
  int best_epoch = 0;
  // TfidfModel::Fingerprint() of the features the scorer was trained on.
  std::string feature_fingerprint;

  // Throws DimMismatch when x.dim differs from weights.size().
  double Logit(const TermVector& x) const;
  double Probability(const TermVector& x) const;

  std::string ToJsonString() const;
  static LinearScorer FromJsonString(std::string_view json);
  void Save(const std::filesystem::path& path) const;
  // Throws MissingArtifact when the file does not exist.
  static LinearScorer Load(const std::filesystem::path& path);
};

// Logistic function, kept strictly inside (0, 1) for finite input.
double Sigmoid(double z);

struct ObjectiveValue {
  double loss = 0.0;
  std::vector<double> weight_gradient;
  double bias_gradient = 0.0;
};

// Mean binary cross-entropy over (x, y) plus l2 * |w|^2, with its gradient.
// Labels are 0 or 1.
ObjectiveValue Objective(const LinearScorer& scorer, std::span<const TermVector> x,
                         std::span<const double> y, double l2);

struct TrainResult {
  LinearScorer scorer;
  // train_loss[0] is the objective before training, train_loss[e] after
  // epoch e. val_loss[e - 1] is the mean cross-entropy on validation after
  // epoch e (empty without validation data).
  std::vector<double> train_loss;
  std::vector<double> val_loss;
};

// Mini-batch gradient descent from zero weights; each epoch visits the
// examples in a fresh seeded permutation. Keeps the epoch with the lowest
// validation loss (earliest on ties), or the last epoch without validation.
// Throws EmptyTrainingSet, DegenerateFeatures (all-zero or zero-dim
// features) and DimMismatch.
TrainResult TrainOnVectors(std::span<const TermVector> x, std::span<const double> y,
                           std::span<const TermVector> val_x, std::span<const double> val_y,
                           size_t dim, const TrainConfig& config);

TrainResult TrainScorerWithHistory(std::span<const LabeledSentence> train,
                                   std::span<const LabeledSentence> val,
                                   const TfidfModel& features, const TrainConfig& config);
LinearScorer TrainScorer(std::span<const LabeledSentence> train,
                         std::span<const LabeledSentence> val, const TfidfModel& features,
                         const TrainConfig& config);

struct ScoredSentence {
  Sentence sentence;
  double probability = 0.5;
};

// Native path; throws DimMismatch when the scorer and features disagree.
std::vector<ScoredSentence> Score(const LinearScorer& scorer, std::span<const Sentence> sentences,
                                  const TfidfModel& features);
// Remote path: the service's probabilities verbatim.
std::vector<ScoredSentence> Score(const ModelServiceClient& client,
                                  std::span<const Sentence> sentences);

class SummaryBudget {
 public:
  enum class Mode { kMaxSentences, kMaxTokens };

  // Both throw BadConfig for a zero limit.
  static SummaryBudget MaxSentences(size_t k);
  static SummaryBudget MaxTokens(size_t b);
  // "sentences:K" or "tokens:B".
  static std::optional<SummaryBudget> Parse(std::string_view spec);

  Mode mode() const { return mode_; }
  size_t limit() const { return limit_; }
  std::string Name() const;

 private:
  SummaryBudget(Mode mode, size_t limit) : mode_(mode), limit_(limit) {}

  Mode mode_;
  size_t limit_;
};

inline constexpr double kNearDuplicateCosine = 0.95;

// Greedy selection from the highest probability down (ties: chronological
// order). A sentence is skipped when it is a near duplicate of an accepted
// one or would push the summary over budget; selection then continues.
// MaxTokens counts the features' tokenizer terms of the joined summary.
// Returns the accepted sentences in chronological order. Throws EmptyInput.
std::vector<ScoredSentence> SelectSentences(std::span<const ScoredSentence> scored,
                                            const SummaryBudget& budget,
                                            const TfidfModel& features);

// SelectSentences joined with the tokenizer's sentence joiner.
std::string AssembleSummary(std::span<const ScoredSentence> scored, const SummaryBudget& budget,
                            const TfidfModel& features);

struct AbstractiveConfig {
  size_t max_input_terms = 1024;
  int max_new_tokens = 256;
};

// Monthly texts in date order joined by '\n', cut after the first
// `max_terms` terms (the returned text ends where that term ends).
// Throws EmptyGroup and BadConfig (max_terms == 0).
std::string AssembleAbstractiveInput(const ReportGroup& group, const Tokenizer& tokenizer,
                                     size_t max_terms = 1024);

// Sends the assembled input to /v1/generate and returns the output unchanged.
std::string SummarizeAbstractive(const ModelServiceClient& client, const ReportGroup& group,
                                 const Tokenizer& tokenizer, const AbstractiveConfig& config = {});

// Every sentence of the group's monthlies, chronologically.
std::vector<Sentence> MonthlySentences(const ReportGroup& group, const SegmentOptions& options = {});

}  // namespace repsumm

#endif  // REPSUMM_EXTRACTOR_H_
