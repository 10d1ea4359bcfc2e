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

#include "repsumm/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "repsumm/corpus.h"
#include "repsumm/error.h"
#include "repsumm/evalharness.h"
#include "repsumm/extractor.h"
#include "repsumm/labeling.h"
#include "repsumm/service_client.h"
#include "repsumm/synthetic.h"
#include "repsumm/textproc.h"

namespace repsumm {
namespace {

namespace fs = std::filesystem;

constexpr const char* kCorpusFile = "corpus.jsonl";
constexpr const char* kSplitFile = "split.json";
constexpr const char* kTrainLabelsFile = "labels_train.jsonl";
constexpr const char* kValidationLabelsFile = "labels_validation.jsonl";
constexpr const char* kFeaturesFile = "tfidf.json";
constexpr const char* kScorerFile = "scorer.json";
constexpr const char* kTruthFile = "truth.jsonl";

// JSON config files. Top-level keys set global options; a nested object
// named after a subcommand sets that subcommand's options.
class ConfigJson : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    nlohmann::ordered_json j = Collect(app, default_also);
    return j.dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j = nlohmann::json::parse(input, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw CLI::ConversionError("config file is not a JSON object");
    }
    std::vector<CLI::ConfigItem> items;
    Flatten(j, {}, items);
    return items;
  }

 private:
  static std::string Scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void Flatten(const nlohmann::json& obj, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        std::vector<std::string> nested = parents;
        nested.push_back(key);
        Flatten(value, nested, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(Scalar(v));
      } else {
        item.inputs.push_back(Scalar(value));
      }
      items.push_back(std::move(item));
    }
  }

  static nlohmann::ordered_json Collect(const CLI::App* app, bool default_also) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (!opt->get_configurable() || opt->get_lnames().empty()) continue;
      const std::string& name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto& results = opt->results();
        j[name] = results.size() == 1 ? nlohmann::ordered_json(results.front())
                                      : nlohmann::ordered_json(results);
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
      nlohmann::ordered_json nested = Collect(sub, default_also);
      if (!nested.empty()) j[sub->get_name()] = std::move(nested);
    }
    return j;
  }
};

struct GlobalOptions {
  std::string workdir = ".";
  std::string service_url;
  fs::path Resolve(const std::string& p) const {
    const fs::path path(p);
    return path.is_absolute() ? path : fs::path(workdir) / path;
  }
};

std::vector<ReportGroup> LoadGroups(const GlobalOptions& g) {
  const fs::path path = g.Resolve(kCorpusFile);
  if (!fs::exists(path)) throw Error(ErrorCode::kMissingArtifact, path.string());
  return Group(Ingest(path));
}

DatasetSplit LoadDatasetSplit(const GlobalOptions& g, const std::vector<ReportGroup>& groups) {
  return LoadSplit(g.Resolve(kSplitFile), groups);
}

// Throws ServiceUnavailable unless the service answers and reports "ok".
void Preflight(const ModelServiceClient& client) {
  const HealthStatus health = client.Health();
  if (health.status != "ok") {
    throw Error(ErrorCode::kServiceUnavailable,
                client.base_url() + " reports status '" + health.status + "'");
  }
}

SplitRatios ParseRatios(const std::vector<double>& values) {
  if (values.size() != 3) throw Error(ErrorCode::kBadRatios, "expected three ratios");
  return SplitRatios{values[0], values[1], values[2]};
}

SummaryBudget ParseBudget(const std::string& spec) {
  std::optional<SummaryBudget> budget = SummaryBudget::Parse(spec);
  if (!budget) throw Error(ErrorCode::kBadConfig, "budget '" + spec + "'");
  return *budget;
}

Tokenizer ParseTokenizer(const std::string& name) {
  std::optional<Tokenizer> tok = Tokenizer::Parse(name);
  if (!tok) throw Error(ErrorCode::kBadConfig, "tokenizer '" + name + "'");
  return *tok;
}

MethodId ParseMethod(const std::string& name) {
  std::optional<MethodId> method = ParseMethodId(name);
  if (!method) throw Error(ErrorCode::kBadConfig, "method '" + name + "'");
  return *method;
}

void PrintLosses(std::ostream& out, const TrainResult& result) {
  out << std::setprecision(6);
  for (size_t e = 1; e < result.train_loss.size(); ++e) {
    out << "epoch " << e << " train_loss " << result.train_loss[e];
    if (e - 1 < result.val_loss.size()) out << " val_loss " << result.val_loss[e - 1];
    out << '\n';
  }
  out << "kept epoch " << result.scorer.best_epoch << " of " << result.scorer.trained_epochs
      << '\n';
}

struct ExperimentInputs {
  std::optional<TfidfModel> features;
  std::optional<LinearScorer> scorer;
  std::optional<ModelServiceClient> service;

  ExperimentArtifacts View() const {
    ExperimentArtifacts a;
    if (features) a.features = &*features;
    if (scorer) a.scorer = &*scorer;
    if (service) a.service = &*service;
    return a;
  }
};

ExperimentInputs LoadExperimentInputs(const GlobalOptions& g, MethodId method) {
  ExperimentInputs in;
  const fs::path features_path = g.Resolve(kFeaturesFile);
  if (method == MethodId::kExNative) {
    in.features = TfidfModel::Load(features_path);
    in.scorer = LinearScorer::Load(g.Resolve(kScorerFile));
    if (in.scorer->feature_fingerprint != in.features->Fingerprint()) {
      throw Error(ErrorCode::kBadConfig, "scorer was trained on different features than " +
                                             features_path.string());
    }
    return in;
  }
  if (method == MethodId::kExRemote || fs::exists(features_path)) {
    in.features = TfidfModel::Load(features_path);
  }
  in.service.emplace(g.service_url);
  Preflight(*in.service);
  return in;
}

}  // namespace

int RunCli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-document summarization of monthly fund reports", "repsumm"};
  app.require_subcommand(1);
  // Global options are accepted after the subcommand name too.
  app.fallthrough();
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.config_formatter(std::make_shared<ConfigJson>());
  app.set_config("--config", "", "JSON file with option values");

  GlobalOptions g;
  g.service_url = DefaultServiceUrl();
  app.add_option("--workdir", g.workdir, "Directory holding artifacts")->capture_default_str();
  app.add_option("--service-url", g.service_url, "Model service base URL")
      ->capture_default_str();

  std::function<void()> action;

  // ingest
  std::string ingest_input;
  CLI::App* ingest = app.add_subcommand("ingest", "Validate a JSONL corpus into the workdir");
  ingest->add_option("input", ingest_input, "Corpus JSONL")->required();
  ingest->callback([&] {
    action = [&] {
      const std::vector<ReportDocument> docs = Ingest(g.Resolve(ingest_input));
      const std::vector<ReportGroup> groups = Group(docs);
      fs::create_directories(g.workdir);
      WriteCorpus(docs, g.Resolve(kCorpusFile));
      out << "documents " << docs.size() << " groups " << groups.size() << '\n';
    };
  });

  // split
  std::vector<double> ratios{0.7, 0.1, 0.2};
  uint64_t split_seed = 0;
  CLI::App* split = app.add_subcommand("split", "Seeded train/validation/test split of groups");
  split->add_option("--ratios", ratios, "train,validation,test")
      ->delimiter(',')
      ->expected(3)
      ->capture_default_str();
  split->add_option("--seed", split_seed, "Shuffle seed")->capture_default_str();
  split->callback([&] {
    action = [&] {
      const SplitRatios r = ParseRatios(ratios);
      const std::vector<ReportGroup> groups = LoadGroups(g);
      const DatasetSplit s = Split(groups, r, split_seed);
      WriteSplit(s, r, g.Resolve(kSplitFile));
      out << "train " << s.train.size() << " validation " << s.validation.size() << " test "
          << s.test.size() << '\n';
    };
  });

  // label
  std::string backend_name = "tfidf";
  double tau = 0.6;
  std::optional<double> top_fraction;
  std::string label_tokenizer;
  CLI::App* label = app.add_subcommand("label", "Similarity labels for train and validation");
  label->add_option("--backend", backend_name, "tfidf or remote")->capture_default_str();
  label->add_option("--tau", tau, "Similarity threshold")->capture_default_str();
  label->add_option("--top-fraction", top_fraction, "Label this fraction of each group instead");
  label->add_option("--tokenizer", label_tokenizer, "whitespace or charN (default: by script)");
  label->callback([&] {
    action = [&] {
      LabelingConfig config;
      std::optional<LabelingBackend> backend = ParseLabelingBackend(backend_name);
      if (!backend) throw Error(ErrorCode::kBadConfig, "backend '" + backend_name + "'");
      config.backend = *backend;
      config.tau = tau;
      config.top_fraction = top_fraction;
      if (!label_tokenizer.empty()) config.tokenizer = ParseTokenizer(label_tokenizer);
      config.Validate();

      const std::vector<ReportGroup> groups = LoadGroups(g);
      const DatasetSplit s = LoadDatasetSplit(g, groups);
      std::optional<ModelServiceClient> client;
      if (config.backend == LabelingBackend::kRemoteEmbedding) {
        client.emplace(g.service_url);
        Preflight(*client);
      }
      const TrainingSet set = BuildTrainingSet(s, config, client ? &*client : nullptr);
      WriteLabels(set.train, g.Resolve(kTrainLabelsFile));
      WriteLabels(set.validation, g.Resolve(kValidationLabelsFile));
      set.features.Save(g.Resolve(kFeaturesFile));

      const auto positives = [](const std::vector<LabeledSentence>& v) {
        return std::count_if(v.begin(), v.end(), [](const LabeledSentence& l) { return l.label; });
      };
      out << "train " << set.train.size() << " (" << positives(set.train) << " positive)"
          << " validation " << set.validation.size() << " (" << positives(set.validation)
          << " positive)\n";
      const fs::path truth = g.Resolve(kTruthFile);
      if (fs::exists(truth)) {
        std::vector<LabeledSentence> all = set.train;
        all.insert(all.end(), set.validation.begin(), set.validation.end());
        out << "labeling_accuracy " << std::setprecision(6) << LabelingAccuracy(all, ReadTruth(truth))
            << '\n';
      }
    };
  });

  // train
  TrainConfig train_config;
  CLI::App* train = app.add_subcommand("train", "Fit the TFIDF logistic sentence scorer");
  train->add_option("--epochs", train_config.epochs)->capture_default_str();
  train->add_option("--batch", train_config.batch_size)->capture_default_str();
  train->add_option("--lr", train_config.learning_rate)->capture_default_str();
  train->add_option("--l2", train_config.l2)->capture_default_str();
  train->add_option("--seed", train_config.seed)->capture_default_str();
  train->callback([&] {
    action = [&] {
      train_config.Validate();
      const TfidfModel features = TfidfModel::Load(g.Resolve(kFeaturesFile));
      const std::vector<LabeledSentence> train_labels = ReadLabels(g.Resolve(kTrainLabelsFile));
      std::vector<LabeledSentence> val_labels;
      const fs::path val_path = g.Resolve(kValidationLabelsFile);
      if (fs::exists(val_path)) val_labels = ReadLabels(val_path);
      const TrainResult result =
          TrainScorerWithHistory(train_labels, val_labels, features, train_config);
      result.scorer.Save(g.Resolve(kScorerFile));
      PrintLosses(out, result);
    };
  });

  // summarize and evaluate share the experiment settings.
  std::string method_name = "ex-native";
  std::string budget_spec = "tokens:256";
  std::string rouge_tokenizer;
  size_t workers = 1;

  std::string summaries_out = "summaries.jsonl";
  CLI::App* summarize = app.add_subcommand("summarize", "Summarize every test group");
  summarize->add_option("--method", method_name, "ex-native, ex-remote or ab-remote")
      ->capture_default_str();
  summarize->add_option("--budget", budget_spec, "sentences:K or tokens:B")
      ->capture_default_str();
  summarize->add_option("--out", summaries_out, "Output JSONL")->capture_default_str();
  summarize->add_option("--workers", workers)->capture_default_str();

  std::string report_out = "report.csv";
  std::string markdown_out;
  std::string dump_out = "groups.jsonl";
  CLI::App* evaluate = app.add_subcommand("evaluate", "ROUGE report over the test groups");
  evaluate->add_option("--method", method_name, "ex-native, ex-remote or ab-remote")
      ->capture_default_str();
  evaluate->add_option("--budget", budget_spec, "sentences:K or tokens:B")
      ->capture_default_str();
  evaluate->add_option("--out", report_out, "CSV report")->capture_default_str();
  evaluate->add_option("--markdown", markdown_out, "Markdown report");
  evaluate->add_option("--dump", dump_out, "Per-group JSONL")->capture_default_str();
  evaluate->add_option("--workers", workers)->capture_default_str();
  evaluate->add_option("--rouge-tokenizer", rouge_tokenizer,
                       "whitespace or charN (default: by script)");

  const auto run_experiment = [&] {
    const MethodId method = ParseMethod(method_name);
    ExperimentConfig config;
    config.budget = ParseBudget(budget_spec);
    if (!rouge_tokenizer.empty()) config.rouge.tokenizer = ParseTokenizer(rouge_tokenizer);
    if (workers == 0) throw Error(ErrorCode::kBadConfig, "workers must be positive");
    config.workers = workers;
    const std::vector<ReportGroup> groups = LoadGroups(g);
    const DatasetSplit s = LoadDatasetSplit(g, groups);
    const ExperimentInputs inputs = LoadExperimentInputs(g, method);
    return RunExperiment(s, method, config, inputs.View());
  };

  summarize->callback([&] {
    action = [&] {
      const ExperimentResult result = run_experiment();
      const fs::path path = g.Resolve(summaries_out);
      std::ofstream file(path, std::ios::binary);
      if (!file) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
      for (size_t i = 0; i < result.groups.size(); ++i) {
        nlohmann::ordered_json j;
        j["fund_id"] = result.groups[i].key.fund_id;
        j["period_key"] = result.groups[i].key.period_key;
        j["summary"] = result.summaries[i];
        file << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
      }
      out << "summaries " << result.groups.size() << '\n';
    };
  });

  evaluate->callback([&] {
    action = [&] {
      const ExperimentResult result = run_experiment();
      EmitReport(result.report, ReportFormat::kCsv, g.Resolve(report_out));
      if (!markdown_out.empty()) {
        EmitReport(result.report, ReportFormat::kMarkdown, g.Resolve(markdown_out));
      }
      const fs::path dump_path = g.Resolve(dump_out);
      std::ofstream dump(dump_path, std::ios::binary);
      if (!dump) throw Error(ErrorCode::kIoError, "cannot write " + dump_path.string());
      WriteGroupDump(result.groups, dump);
      const RougeSet& m = result.report.overall.mean;
      out << result.report.method << " groups " << result.report.overall.n_groups << " R1 "
          << FormatMetric(m.r1.f1) << " R2 " << FormatMetric(m.r2.f1) << " RL "
          << FormatMetric(m.rl.f1) << '\n';
    };
  });

  // gen-synthetic
  SyntheticOptions synthetic;
  CLI::App* gen = app.add_subcommand("gen-synthetic", "Write a planted-summary corpus");
  gen->add_option("--funds", synthetic.funds)->capture_default_str();
  gen->add_option("--seed", synthetic.seed)->capture_default_str();
  gen->add_option("--monthlies", synthetic.monthlies_per_group)->capture_default_str();
  gen->add_option("--noise", synthetic.noise_probability,
                  "Probability of an unplanted investment sentence")
      ->capture_default_str();
  gen->callback([&] {
    action = [&] {
      const SyntheticCorpus corpus = GenerateSynthetic(synthetic);
      fs::create_directories(g.workdir);
      WriteCorpus(corpus.documents, g.Resolve(kCorpusFile));
      WriteTruth(corpus.key_sentences, g.Resolve(kTruthFile));
      out << "documents " << corpus.documents.size() << " key_sentences "
          << corpus.key_sentences.size() << '\n';
    };
  });

  for (CLI::App* sub : {ingest, split, label, train, summarize, evaluate, gen}) {
    sub->configurable();
  }

  try {
    std::vector<std::string> argv(args.rbegin(), args.rend());
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (action) action();
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return IsEnvironmentError(e.code()) ? kExitEnvironment : kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << "error: IoError: " << e.what() << '\n';
    return kExitEnvironment;
  } catch (const nlohmann::json::exception& e) {
    err << "error: SchemaViolation: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace repsumm
