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

#ifndef INTENTKIT_EXPERIMENT_H_
#define INTENTKIT_EXPERIMENT_H_

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "intentkit/augmentation.h"
#include "intentkit/corpus.h"
#include "intentkit/embedding.h"
#include "intentkit/eval.h"
#include "intentkit/fewshot_head.h"
#include "intentkit/http_provider.h"
#include "intentkit/llm_gateway.h"
#include "intentkit/zeroshot.h"

namespace intentkit {

// Methods a run can evaluate.
inline constexpr const char* kMethods[] = {
    "fewshot",           "zeroshot",           "zeroshot_filtered",
    "augment_paraphrase", "augment_description", "rank_classify"};

bool IsKnownMethod(const std::string& method);

struct EmbeddingSettings {
  std::string provider = "hash";  // hash | remote
  std::size_t dimension = 256;
  HttpEndpointConfig http;
};

struct CompletionSettings {
  // oracle | echo | scripted | remote
  std::string provider = "oracle";
  bool constrain_to_prompt = true;  // oracle only
  // scripted only: exact prompts, then regex patterns, then fallback.
  std::vector<std::pair<std::string, std::string>> exact;
  std::vector<std::pair<std::string, std::string>> patterns;
  std::string fallback;
  std::vector<std::string> prefer;
  HttpEndpointConfig http;
};

struct ExperimentConfig {
  std::string dataset;  // directory
  std::string method = "fewshot";
  int k = 5;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::string output_dir = "runs/out";
  EmbeddingSettings embedding;
  CompletionSettings completion;
  TrainConfig train;
  double threshold = 0.0;
  ZeroShotConfig zeroshot;
  AugConfig augment;
  std::size_t parallelism = 1;
  bool concurrent_seeds = false;

  // Throws ConfigError. Never touches the network or the filesystem.
  void Validate() const;
};

// Parses a JSON config. String values may reference environment variables
// as ${NAME}; an unset variable is a ConfigError. Unknown keys are errors.
ExperimentConfig ParseExperimentConfig(const std::string& json_text);
ExperimentConfig LoadExperimentConfig(const std::string& path);

// Fully populated config as JSON (defaults included). Bearer tokens are
// never stored, only the names of the variables holding them.
std::string ExperimentConfigJson(const ExperimentConfig& config);

// Builds providers from settings. Remote providers read their token here.
std::unique_ptr<EmbeddingProvider> MakeEmbeddingProvider(
    const EmbeddingSettings& settings);
std::unique_ptr<CompletionProvider> MakeCompletionProvider(
    const CompletionSettings& settings, const Dataset& dataset);

struct SeedFailure {
  std::uint64_t seed = 0;
  std::string message;
};

struct ExperimentOutcome {
  std::vector<RunResult> runs;  // successful seeds, in config order
  std::vector<SeedFailure> failures;
  std::optional<AggregateReport> report;  // absent if every seed failed

  int exit_code() const { return failures.empty() ? 0 : 1; }
};

// Runs every seed of `config` on an already loaded dataset and writes
//   <out>/config.json, <out>/report.json, <out>/report.txt,
//   <out>/failures.json (only when a seed failed) and
//   <out>/seed_<s>/{sample.jsonl, predictions.jsonl, metrics.json, ...}.
// Outputs carry no timestamps or timings, so identical inputs and
// deterministic providers give byte-identical files. Progress goes to `log`.
ExperimentOutcome RunExperiment(const ExperimentConfig& config,
                                const Dataset& dataset,
                                const EmbeddingProvider& embedder,
                                const CompletionProvider& completer,
                                std::ostream& log);

// Loads the dataset, builds providers and runs.
ExperimentOutcome RunExperiment(const ExperimentConfig& config,
                                std::ostream& log);

}  // namespace intentkit

#endif  // INTENTKIT_EXPERIMENT_H_
