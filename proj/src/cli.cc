//
// Copyright 2026 The intentkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "intentkit/cli.h"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "intentkit/augmentation.h"
#include "intentkit/corpus.h"
#include "intentkit/error.h"
#include "intentkit/eval.h"
#include "intentkit/experiment.h"
#include "intentkit/fewshot_head.h"
#include "intentkit/text_util.h"
#include "intentkit/tfew_scoring.h"
#include "intentkit/zeroshot.h"

namespace intentkit {
namespace {

struct GlobalOptions {
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<std::uint64_t> seeds;
  std::string provider;
  bool mock = false;
  std::size_t parallelism = 0;  // 0 = keep config value
};

// Config file (or defaults), then command-line overrides.
ExperimentConfig ResolveConfig(const GlobalOptions& g,
                               const std::string& dataset_arg,
                               const std::string& method) {
  ExperimentConfig c;
  if (!g.config_path.empty()) c = LoadExperimentConfig(g.config_path);
  if (!dataset_arg.empty()) c.dataset = dataset_arg;
  if (c.dataset.empty()) {
    throw ConfigError("no dataset given: pass a dataset directory or --config");
  }
  if (!method.empty()) c.method = method;
  const bool augmenting = c.method.starts_with("augment_");
  if (g.config_path.empty() && augmenting) c.completion.provider = "echo";
  if (g.mock) {
    c.embedding.provider = "hash";
    c.completion.provider = augmenting ? "echo" : "oracle";
  }
  if (!g.provider.empty()) c.completion.provider = g.provider;
  if (!g.seeds.empty()) c.seeds = g.seeds;
  if (g.seed) c.seeds = {*g.seed};
  if (g.parallelism > 0) c.parallelism = g.parallelism;
  c.augment.parallelism = c.parallelism;
  if (!g.out.empty()) c.output_dir = g.out;
  c.zeroshot.use_filtering = c.method == "zeroshot_filtered";
  return c;
}

// Writes to --out when given, else to `out`.
void Emit(const GlobalOptions& g, std::ostream& out, const std::string& text) {
  if (g.out.empty()) {
    out << text;
  } else {
    const auto parent = std::filesystem::path(g.out).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    WriteFile(g.out, text);
  }
}

std::vector<LabeledUtterance> EvalRows(const Dataset& dataset,
                                       const std::string& input) {
  if (!input.empty()) return LoadUtterancesJsonl(input, dataset, true);
  return dataset.test();
}

void PrintSummary(const std::vector<Prediction>& predictions,
                  std::ostream& err) {
  const bool any_in_scope =
      std::any_of(predictions.begin(), predictions.end(),
                  [](const Prediction& p) { return p.gold.has_value(); });
  if (any_in_scope) {
    err << "in-scope accuracy: " << InScopeAccuracy(predictions) << "\n";
  }
  if (const auto oos = OosRecall(predictions)) {
    err << "oos recall: " << *oos << "\n";
  }
}

int CmdStats(const std::string& dataset_dir, bool as_json,
             std::ostream& out) {
  const Dataset ds = LoadDataset(dataset_dir);
  const DatasetStats st = ComputeStats(ds);
  if (as_json) {
    nlohmann::ordered_json j;
    j["dataset"] = ds.name();
    j["intents"] = st.intent_count;
    j["train"] = st.train_size;
    j["test"] = st.test_size;
    j["oos"] = st.oos_count;
    nlohmann::ordered_json per = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < ds.intents().size(); ++i) {
      per[ds.intents()[i].name] = {{"train", st.train_per_intent[i]},
                                   {"test", st.test_per_intent[i]}};
    }
    j["per_intent"] = per;
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << "intents | train | test\n";
  out << st.intent_count << " | " << st.train_size << " | " << st.test_size
      << "\n";
  return kExitOk;
}

struct SubOptions {
  std::string dataset;
  std::optional<int> k;
  std::string examples;
  std::string head;
  std::string input;
  std::optional<double> threshold;
  std::optional<int> epochs;
  std::optional<double> lr;
  std::optional<std::size_t> hidden;
  std::optional<double> l2;
  bool filter = false;
  std::optional<int> top_k;
  bool no_none = false;
  std::string approach = "paraphrase";
  std::optional<int> n_generate;
  bool include_seed = false;
  std::optional<int> seed_size;
  bool concurrent_seeds = false;
  bool json = false;
  std::vector<std::string> reports;
};

void ApplyTrainOverrides(const SubOptions& s, ExperimentConfig& c) {
  if (s.k) c.k = *s.k;
  if (s.epochs) c.train.epochs = *s.epochs;
  if (s.lr) c.train.learning_rate = *s.lr;
  if (s.hidden) c.train.hidden_dim = *s.hidden;
  if (s.l2) c.train.l2_penalty = *s.l2;
  if (s.threshold) c.threshold = *s.threshold;
}

int CmdSample(const GlobalOptions& g, const SubOptions& s, std::ostream& out) {
  ExperimentConfig c = ResolveConfig(g, s.dataset, "fewshot");
  if (s.k) c.k = *s.k;
  c.Validate();
  const Dataset ds = LoadDataset(c.dataset);
  const FewShotSample sample = SampleFewShot(ds, c.k, c.seeds.front());
  Emit(g, out, FormatUtterancesJsonl(sample.Flatten()));
  return kExitOk;
}

int CmdTrain(const GlobalOptions& g, const SubOptions& s, std::ostream& err) {
  ExperimentConfig c = ResolveConfig(g, s.dataset, "fewshot");
  ApplyTrainOverrides(s, c);
  c.Validate();
  if (g.out.empty()) throw ConfigError("train: --out <head.json> is required");
  const Dataset ds = LoadDataset(c.dataset);
  const auto embedder = MakeEmbeddingProvider(c.embedding);
  TrainConfig train = c.train;
  train.seed = c.seeds.front();
  std::vector<LabeledUtterance> examples;
  if (s.examples.empty()) {
    examples = SampleFewShot(ds, c.k, train.seed).Flatten();
  } else {
    examples = LoadUtterancesJsonl(s.examples, ds, false);
  }
  const ClassifierHead head =
      TrainHead(examples, ds.IntentNames(), *embedder, train);
  const auto parent = std::filesystem::path(g.out).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  SaveHead(head, g.out);
  err << "trained on " << examples.size() << " utterances, "
      << ds.intents().size() << " intents -> " << g.out << "\n";
  return kExitOk;
}

int CmdPredict(const GlobalOptions& g, const SubOptions& s, std::ostream& out,
               std::ostream& err) {
  ExperimentConfig c = ResolveConfig(g, s.dataset, "fewshot");
  ApplyTrainOverrides(s, c);
  c.Validate();
  if (s.head.empty()) throw ConfigError("predict: --head is required");
  const Dataset ds = LoadDataset(c.dataset);
  const ClassifierHead head = LoadHead(s.head);
  const auto embedder = MakeEmbeddingProvider(c.embedding);
  const auto rows = EvalRows(ds, s.input);
  std::vector<std::string> texts;
  for (const auto& r : rows) texts.push_back(r.text);
  const auto vectors = embedder->EmbedBatch(texts);
  const auto outcomes =
      PredictBatch(head, vectors, c.threshold, c.train.backend);
  std::vector<Prediction> predictions;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    predictions.push_back({rows[i].text, rows[i].intent, outcomes[i].label});
  }
  Emit(g, out, PredictionsJsonl(predictions));
  PrintSummary(predictions, err);
  return kExitOk;
}

int CmdZeroShot(const GlobalOptions& g, const SubOptions& s, std::ostream& out,
                std::ostream& err) {
  ExperimentConfig c =
      ResolveConfig(g, s.dataset, s.filter ? "zeroshot_filtered" : "zeroshot");
  if (s.k) c.k = *s.k;
  if (s.top_k) c.zeroshot.top_k = *s.top_k;
  if (s.no_none) c.zeroshot.include_none_option = false;
  c.Validate();
  const Dataset ds = LoadDataset(c.dataset);
  const auto completer = MakeCompletionProvider(c.completion, ds);
  std::unique_ptr<EmbeddingProvider> embedder;
  std::optional<FewShotSample> sample;
  if (c.zeroshot.use_filtering) {
    embedder = MakeEmbeddingProvider(c.embedding);
    sample = SampleFewShot(ds, c.k, c.seeds.front());
  }
  const auto rows = EvalRows(ds, s.input);
  std::vector<std::string> texts;
  for (const auto& r : rows) texts.push_back(r.text);
  const auto outcomes = ClassifyZeroShotBatch(
      texts, ds, c.zeroshot, *completer, embedder.get(),
      sample ? &*sample : nullptr, c.parallelism);
  std::string report;
  std::vector<Prediction> predictions;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    report += ZeroShotReportLine(rows[i], outcomes[i]);
    predictions.push_back(
        {rows[i].text, rows[i].intent, outcomes[i].prediction.label});
  }
  Emit(g, out, report);
  PrintSummary(predictions, err);
  return kExitOk;
}

int CmdAugment(const GlobalOptions& g, const SubOptions& s, std::ostream& out,
               std::ostream& err) {
  const AugmentApproach approach = ParseApproach(s.approach);
  ExperimentConfig c =
      ResolveConfig(g, s.dataset, "augment_" + ApproachName(approach));
  if (s.n_generate) c.augment.n_generate = *s.n_generate;
  if (s.include_seed) c.augment.include_seed = true;
  if (s.seed_size) c.augment.seed_size = *s.seed_size;
  c.Validate();
  const Dataset ds = LoadDataset(c.dataset);
  const auto completer = MakeCompletionProvider(c.completion, ds);
  const FewShotSample seed_set =
      SampleFewShot(ds, c.augment.seed_size, c.seeds.front());
  const AugmentResult result =
      AugmentDataset(seed_set, ds, *completer, c.augment, approach);
  if (g.out.empty()) {
    out << FormatUtterancesJsonl(result.utterances);
  } else {
    ExportAugmented(result, g.out);
  }
  err << AugmentManifestJson(result);
  return result.errors.empty() ? kExitOk : kExitFailure;
}

int CmdScore(const GlobalOptions& g, const SubOptions& s, std::ostream& out,
             std::ostream& err) {
  ExperimentConfig c = ResolveConfig(g, s.dataset, "rank_classify");
  c.Validate();
  const Dataset ds = LoadDataset(c.dataset);
  const auto scorer = MakeCompletionProvider(c.completion, ds);
  const auto rows = EvalRows(ds, s.input);
  std::vector<std::string> lines(rows.size());
  std::vector<Prediction> predictions(rows.size());
  BoundedParallelFor(rows.size(), c.parallelism, [&](std::size_t i) {
    const std::string prompt =
        BuildZeroShotPrompt(ds.intents(), rows[i].text, false);
    const RankResult r = RankClassify(prompt, ds.intents(), *scorer);
    lines[i] = ScoringReportLine(rows[i], r);
    predictions[i] = {rows[i].text, rows[i].intent, r.predicted};
  });
  std::string report;
  for (const auto& l : lines) report += l;
  Emit(g, out, report);
  PrintSummary(predictions, err);
  return kExitOk;
}

int CmdRun(const GlobalOptions& g, const SubOptions& s, std::ostream& out,
           std::ostream& err) {
  if (g.config_path.empty()) throw ConfigError("run: --config is required");
  ExperimentConfig c = ResolveConfig(g, s.dataset, "");
  if (s.concurrent_seeds) c.concurrent_seeds = true;
  c.Validate();
  const ExperimentOutcome outcome = RunExperiment(c, err);
  if (outcome.report) {
    const std::vector<AggregateReport> reports = {*outcome.report};
    out << FormatReportTable(reports);
  }
  for (const auto& f : outcome.failures) {
    err << "seed " << f.seed << " failed: " << f.message << "\n";
  }
  return outcome.exit_code();
}

int CmdCompare(const SubOptions& s, std::ostream& out) {
  if (s.reports.size() < 2) {
    throw ConfigError("compare: needs at least two report files");
  }
  std::vector<AggregateReport> reports;
  for (const auto& path : s.reports) {
    const std::string text = ReadFile(path);
    try {
      reports.push_back(ParseReportJson(text));
    } catch (const DatasetError& e) {
      throw DatasetError(path, 0, e.what());
    }
  }
  for (const auto& r : reports) {
    if (r.dataset != reports.front().dataset) {
      throw ConfigError("compare: reports are for different datasets ('" +
                        reports.front().dataset + "' vs '" + r.dataset + "')");
    }
  }
  out << FormatReportTable(reports);
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app("Few-shot and zero-shot intent classification experiments",
               "intentkit");
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "Experiment config (JSON)");
  app.add_option("--out", g.out, "Output file or directory");
  app.add_option("--seed", g.seed, "Single seed");
  app.add_option("--seeds", g.seeds, "Comma-separated seeds")->delimiter(',');
  app.add_option("--provider", g.provider,
                 "Completion provider: oracle, echo, scripted, remote");
  app.add_flag("--mock", g.mock, "Use hermetic mock providers");
  app.add_option("--parallelism", g.parallelism,
                 "Maximum provider requests in flight")
      ->check(CLI::PositiveNumber);

  SubOptions s;
  auto dataset_arg = [&](CLI::App* sub) {
    sub->add_option("dataset", s.dataset, "Dataset directory");
  };
  auto train_opts = [&](CLI::App* sub) {
    sub->add_option("--epochs", s.epochs);
    sub->add_option("--lr", s.lr);
    sub->add_option("--hidden", s.hidden);
    sub->add_option("--l2", s.l2);
    sub->add_option("--threshold", s.threshold);
  };

  auto* stats = app.add_subcommand("stats", "Dataset statistics");
  dataset_arg(stats);
  stats->add_flag("--json", s.json, "Print JSON instead of a table");

  auto* sample = app.add_subcommand("sample", "Draw a K-shot sample (JSONL)");
  dataset_arg(sample);
  sample->add_option("-k", s.k, "Utterances per intent");

  auto* train = app.add_subcommand("train", "Train a classifier head");
  dataset_arg(train);
  train->add_option("-k", s.k, "Utterances per intent");
  train->add_option("--examples", s.examples,
                    "Train on this JSONL instead of a K-shot sample");
  train_opts(train);

  auto* predict = app.add_subcommand("predict", "Predict with a trained head");
  dataset_arg(predict);
  predict->add_option("--head", s.head, "Head file from `train`");
  predict->add_option("--input", s.input, "JSONL rows (default: test split)");
  train_opts(predict);

  auto* zeroshot = app.add_subcommand("zeroshot", "Zero-shot classification");
  dataset_arg(zeroshot);
  zeroshot->add_flag("--filter", s.filter, "Restrict prompts to top-k intents");
  zeroshot->add_option("--top-k", s.top_k);
  zeroshot->add_option("-k", s.k, "Examples per intent for filtering");
  zeroshot->add_flag("--no-none", s.no_none, "Omit none_of_the_above");
  zeroshot->add_option("--input", s.input, "JSONL rows (default: test split)");

  auto* augment = app.add_subcommand("augment", "Generate training utterances");
  dataset_arg(augment);
  augment->add_option("--approach", s.approach, "paraphrase or description");
  augment->add_option("-n", s.n_generate, "Utterances per intent");
  augment->add_flag("--include-seed", s.include_seed);
  augment->add_option("--seed-size", s.seed_size);

  auto* score = app.add_subcommand("score", "Rank classification by scoring");
  dataset_arg(score);
  score->add_option("--input", s.input, "JSONL rows (default: test split)");

  auto* run = app.add_subcommand("run", "Run a multi-seed experiment");
  run->add_flag("--concurrent-seeds", s.concurrent_seeds);

  auto* compare = app.add_subcommand("compare", "Compare report files");
  compare->add_option("reports", s.reports, "report.json files")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*stats) {
      std::string dir = s.dataset;
      if (dir.empty() && !g.config_path.empty()) {
        dir = LoadExperimentConfig(g.config_path).dataset;
      }
      if (dir.empty()) throw ConfigError("stats: no dataset given");
      return CmdStats(dir, s.json, out);
    }
    if (*sample) return CmdSample(g, s, out);
    if (*train) return CmdTrain(g, s, err);
    if (*predict) return CmdPredict(g, s, out, err);
    if (*zeroshot) return CmdZeroShot(g, s, out, err);
    if (*augment) return CmdAugment(g, s, out, err);
    if (*score) return CmdScore(g, s, out, err);
    if (*run) return CmdRun(g, s, out, err);
    if (*compare) return CmdCompare(s, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DatasetError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace intentkit
