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

#include "repsumm/extractor.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "repsumm/error.h"
#include "repsumm/random.h"

namespace repsumm {
namespace {

// log(1 + exp(z)) without overflow.
double Softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double MeanCrossEntropy(const LinearScorer& s, std::span<const TermVector> x,
                        std::span<const double> y) {
  double sum = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double z = s.Logit(x[i]);
    sum += Softplus(z) - y[i] * z;
  }
  return sum / static_cast<double>(x.size());
}

double SquaredNorm(std::span<const double> w) {
  double sum = 0.0;
  for (double v : w) sum += v * v;
  return sum;
}

void SplitLabeled(std::span<const LabeledSentence> labeled, const TfidfModel& features,
                  std::vector<TermVector>& x, std::vector<double>& y) {
  x.reserve(labeled.size());
  y.reserve(labeled.size());
  for (const LabeledSentence& l : labeled) {
    x.push_back(features.Transform(l.sentence.text));
    y.push_back(l.label ? 1.0 : 0.0);
  }
}

std::string JoinChronological(std::vector<const ScoredSentence*> picked, std::string_view joiner) {
  std::sort(picked.begin(), picked.end(), [](const ScoredSentence* a, const ScoredSentence* b) {
    return ChronologicallyBefore(a->sentence, b->sentence);
  });
  std::string out;
  for (size_t i = 0; i < picked.size(); ++i) {
    if (i > 0) out.append(joiner);
    out.append(picked[i]->sentence.text);
  }
  return out;
}

}  // namespace

void TrainConfig::Validate() const {
  if (epochs < 1) throw Error(ErrorCode::kBadConfig, "epochs must be positive");
  if (batch_size < 1) throw Error(ErrorCode::kBadConfig, "batch size must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::kBadConfig, "learning rate must be positive");
  }
  if (!(l2 >= 0.0) || !std::isfinite(l2)) {
    throw Error(ErrorCode::kBadConfig, "l2 must be non-negative");
  }
}

double Sigmoid(double z) {
  double p;
  if (z >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-z));
  } else {
    const double e = std::exp(z);
    p = e / (1.0 + e);
  }
  return std::clamp(p, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

double LinearScorer::Logit(const TermVector& x) const {
  if (x.dim != weights.size()) {
    throw Error(ErrorCode::kDimMismatch, "features have dim " + std::to_string(x.dim) +
                                             ", scorer has " + std::to_string(weights.size()));
  }
  double z = bias;
  for (const auto& [col, v] : x.entries) z += weights[col] * v;
  return z;
}

double LinearScorer::Probability(const TermVector& x) const { return Sigmoid(Logit(x)); }

std::string LinearScorer::ToJsonString() const {
  nlohmann::ordered_json j;
  j["feature_fingerprint"] = feature_fingerprint;
  j["trained_epochs"] = trained_epochs;
  j["best_epoch"] = best_epoch;
  j["bias"] = bias;
  j["weights"] = weights;
  return j.dump();
}

LinearScorer LinearScorer::FromJsonString(std::string_view json) {
  nlohmann::json j = nlohmann::json::parse(json, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("weights") || !j.contains("bias")) {
    throw Error(ErrorCode::kSchemaViolation, "scorer: expected object with weights and bias");
  }
  LinearScorer s;
  s.weights = j["weights"].get<std::vector<double>>();
  s.bias = j["bias"].get<double>();
  s.trained_epochs = j.value("trained_epochs", 0);
  s.best_epoch = j.value("best_epoch", 0);
  s.feature_fingerprint = j.value("feature_fingerprint", "");
  return s;
}

void LinearScorer::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << ToJsonString() << '\n';
}

LinearScorer LinearScorer::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingArtifact, "trained scorer " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return FromJsonString(buf.str());
}

ObjectiveValue Objective(const LinearScorer& scorer, std::span<const TermVector> x,
                         std::span<const double> y, double l2) {
  ObjectiveValue out;
  out.weight_gradient.assign(scorer.weights.size(), 0.0);
  if (x.empty()) return out;
  const double inv_n = 1.0 / static_cast<double>(x.size());
  double data_loss = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double z = scorer.Logit(x[i]);
    data_loss += Softplus(z) - y[i] * z;
    const double residual = Sigmoid(z) - y[i];
    for (const auto& [col, v] : x[i].entries) out.weight_gradient[col] += residual * v * inv_n;
    out.bias_gradient += residual * inv_n;
  }
  out.loss = data_loss * inv_n + l2 * SquaredNorm(scorer.weights);
  for (size_t k = 0; k < scorer.weights.size(); ++k) {
    out.weight_gradient[k] += 2.0 * l2 * scorer.weights[k];
  }
  return out;
}

TrainResult TrainOnVectors(std::span<const TermVector> x, std::span<const double> y,
                           std::span<const TermVector> val_x, std::span<const double> val_y,
                           size_t dim, const TrainConfig& config) {
  config.Validate();
  if (x.empty()) throw Error(ErrorCode::kEmptyTrainingSet, "no training sentences");
  if (x.size() != y.size() || val_x.size() != val_y.size()) {
    throw Error(ErrorCode::kDimMismatch, "feature and label counts differ");
  }
  if (dim == 0) throw Error(ErrorCode::kDegenerateFeatures, "feature space is empty");
  for (const TermVector& v : x) {
    if (v.dim != dim) throw Error(ErrorCode::kDimMismatch, "training vector dim");
  }
  for (const TermVector& v : val_x) {
    if (v.dim != dim) throw Error(ErrorCode::kDimMismatch, "validation vector dim");
  }
  if (std::all_of(x.begin(), x.end(), [](const TermVector& v) { return v.IsZero(); })) {
    throw Error(ErrorCode::kDegenerateFeatures, "every training vector is zero");
  }

  TrainResult result;
  LinearScorer current;
  current.weights.assign(dim, 0.0);
  result.train_loss.push_back(MeanCrossEntropy(current, x, y) + config.l2 * SquaredNorm(current.weights));

  std::vector<size_t> order(x.size());
  std::iota(order.begin(), order.end(), size_t{0});
  DeterministicRng rng(config.seed);
  const double decay = 1.0 - 2.0 * config.learning_rate * config.l2;
  const auto batch = static_cast<size_t>(config.batch_size);

  LinearScorer best = current;
  double best_val = std::numeric_limits<double>::infinity();
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.Shuffle(std::span<size_t>(order));
    for (size_t start = 0; start < order.size(); start += batch) {
      const size_t end = std::min(order.size(), start + batch);
      const double step = config.learning_rate / static_cast<double>(end - start);
      // Residuals use the parameters from before this step.
      std::vector<double> residuals;
      residuals.reserve(end - start);
      for (size_t i = start; i < end; ++i) {
        residuals.push_back(Sigmoid(current.Logit(x[order[i]])) - y[order[i]]);
      }
      if (config.l2 > 0.0) {
        for (double& w : current.weights) w *= decay;
      }
      double bias_grad = 0.0;
      for (size_t i = start; i < end; ++i) {
        const double r = residuals[i - start];
        for (const auto& [col, v] : x[order[i]].entries) current.weights[col] -= step * r * v;
        bias_grad += r;
      }
      current.bias -= step * bias_grad;
    }
    current.trained_epochs = epoch;
    result.train_loss.push_back(MeanCrossEntropy(current, x, y) +
                                config.l2 * SquaredNorm(current.weights));
    if (!val_x.empty()) {
      const double val = MeanCrossEntropy(current, val_x, val_y);
      result.val_loss.push_back(val);
      if (val < best_val) {
        best_val = val;
        best = current;
        best.best_epoch = epoch;
      }
    }
  }
  if (val_x.empty()) {
    best = current;
    best.best_epoch = config.epochs;
  }
  best.trained_epochs = config.epochs;
  result.scorer = std::move(best);
  return result;
}

TrainResult TrainScorerWithHistory(std::span<const LabeledSentence> train,
                                   std::span<const LabeledSentence> val,
                                   const TfidfModel& features, const TrainConfig& config) {
  std::vector<TermVector> x, vx;
  std::vector<double> y, vy;
  SplitLabeled(train, features, x, y);
  SplitLabeled(val, features, vx, vy);
  TrainResult result = TrainOnVectors(x, y, vx, vy, features.dim(), config);
  result.scorer.feature_fingerprint = features.Fingerprint();
  return result;
}

LinearScorer TrainScorer(std::span<const LabeledSentence> train,
                         std::span<const LabeledSentence> val, const TfidfModel& features,
                         const TrainConfig& config) {
  return TrainScorerWithHistory(train, val, features, config).scorer;
}

std::vector<ScoredSentence> Score(const LinearScorer& scorer, std::span<const Sentence> sentences,
                                  const TfidfModel& features) {
  if (scorer.weights.size() != features.dim()) {
    throw Error(ErrorCode::kDimMismatch,
                "scorer has " + std::to_string(scorer.weights.size()) +
                    " weights, feature model has " + std::to_string(features.dim()) + " terms");
  }
  std::vector<ScoredSentence> out;
  out.reserve(sentences.size());
  for (const Sentence& s : sentences) {
    out.push_back({s, scorer.Probability(features.Transform(s.text))});
  }
  return out;
}

std::vector<ScoredSentence> Score(const ModelServiceClient& client,
                                  std::span<const Sentence> sentences) {
  std::vector<std::string> texts;
  texts.reserve(sentences.size());
  for (const Sentence& s : sentences) texts.push_back(s.text);
  const std::vector<double> scores = client.Score(texts);
  std::vector<ScoredSentence> out;
  out.reserve(sentences.size());
  for (size_t i = 0; i < sentences.size(); ++i) out.push_back({sentences[i], scores[i]});
  return out;
}

SummaryBudget SummaryBudget::MaxSentences(size_t k) {
  if (k == 0) throw Error(ErrorCode::kBadConfig, "sentence budget must be >= 1");
  return SummaryBudget(Mode::kMaxSentences, k);
}

SummaryBudget SummaryBudget::MaxTokens(size_t b) {
  if (b == 0) throw Error(ErrorCode::kBadConfig, "token budget must be >= 1");
  return SummaryBudget(Mode::kMaxTokens, b);
}

std::optional<SummaryBudget> SummaryBudget::Parse(std::string_view spec) {
  const size_t colon = spec.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view number = spec.substr(colon + 1);
  size_t value = 0;
  auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
  if (ec != std::errc() || ptr != number.data() + number.size() || value == 0) return std::nullopt;
  if (kind == "sentences") return MaxSentences(value);
  if (kind == "tokens") return MaxTokens(value);
  return std::nullopt;
}

std::string SummaryBudget::Name() const {
  return (mode_ == Mode::kMaxSentences ? "sentences:" : "tokens:") + std::to_string(limit_);
}

std::vector<ScoredSentence> SelectSentences(std::span<const ScoredSentence> scored,
                                            const SummaryBudget& budget,
                                            const TfidfModel& features) {
  if (scored.empty()) throw Error(ErrorCode::kEmptyInput, "no sentences to summarize");
  std::vector<size_t> order(scored.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (scored[a].probability != scored[b].probability) {
      return scored[a].probability > scored[b].probability;
    }
    return ChronologicallyBefore(scored[a].sentence, scored[b].sentence);
  });

  const Tokenizer& tokenizer = features.tokenizer();
  std::vector<const ScoredSentence*> accepted;
  std::vector<TermVector> accepted_vectors;
  for (size_t idx : order) {
    if (budget.mode() == SummaryBudget::Mode::kMaxSentences && accepted.size() >= budget.limit()) {
      break;
    }
    const ScoredSentence& candidate = scored[idx];
    TermVector v = features.Transform(candidate.sentence.text);
    const bool duplicate =
        std::any_of(accepted_vectors.begin(), accepted_vectors.end(),
                    [&](const TermVector& a) { return Cosine(v, a) >= kNearDuplicateCosine; });
    if (duplicate) continue;
    if (budget.mode() == SummaryBudget::Mode::kMaxTokens) {
      std::vector<const ScoredSentence*> trial = accepted;
      trial.push_back(&candidate);
      const size_t terms =
          tokenizer.CountTerms(JoinChronological(std::move(trial), tokenizer.SentenceJoiner()));
      if (terms > budget.limit()) continue;
    }
    accepted.push_back(&candidate);
    accepted_vectors.push_back(std::move(v));
  }

  std::sort(accepted.begin(), accepted.end(), [](const ScoredSentence* a, const ScoredSentence* b) {
    return ChronologicallyBefore(a->sentence, b->sentence);
  });
  std::vector<ScoredSentence> out;
  out.reserve(accepted.size());
  for (const ScoredSentence* s : accepted) out.push_back(*s);
  return out;
}

std::string AssembleSummary(std::span<const ScoredSentence> scored, const SummaryBudget& budget,
                            const TfidfModel& features) {
  const std::vector<ScoredSentence> picked = SelectSentences(scored, budget, features);
  std::vector<const ScoredSentence*> ptrs;
  for (const ScoredSentence& s : picked) ptrs.push_back(&s);
  return JoinChronological(std::move(ptrs), features.tokenizer().SentenceJoiner());
}

std::string AssembleAbstractiveInput(const ReportGroup& group, const Tokenizer& tokenizer,
                                     size_t max_terms) {
  if (group.monthlies.empty()) {
    throw Error(ErrorCode::kEmptyGroup, group.key().ToString() + " has no monthly reports");
  }
  if (max_terms == 0) throw Error(ErrorCode::kBadConfig, "max_terms must be >= 1");
  std::vector<const ReportDocument*> monthlies;
  for (const ReportDocument& m : group.monthlies) monthlies.push_back(&m);
  std::stable_sort(monthlies.begin(), monthlies.end(),
                   [](const ReportDocument* a, const ReportDocument* b) {
                     return a->date != b->date ? a->date < b->date : a->doc_id < b->doc_id;
                   });
  std::string text;
  for (size_t i = 0; i < monthlies.size(); ++i) {
    if (i > 0) text.push_back('\n');
    text.append(monthlies[i]->text);
  }
  const std::vector<Term> terms = tokenizer.TokenizeWithSpans(text);
  if (terms.size() <= max_terms) return text;
  return text.substr(0, terms[max_terms - 1].end);
}

std::string SummarizeAbstractive(const ModelServiceClient& client, const ReportGroup& group,
                                 const Tokenizer& tokenizer, const AbstractiveConfig& config) {
  const std::string input = AssembleAbstractiveInput(group, tokenizer, config.max_input_terms);
  return client
      .Generate(input, static_cast<int>(config.max_input_terms), config.max_new_tokens)
      .output;
}

std::vector<Sentence> MonthlySentences(const ReportGroup& group, const SegmentOptions& options) {
  std::vector<Sentence> out;
  for (const ReportDocument& m : group.monthlies) {
    for (Sentence& s : SegmentDocument(m, options)) out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), ChronologicallyBefore);
  return out;
}

}  // namespace repsumm
