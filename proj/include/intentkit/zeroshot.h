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

#ifndef INTENTKIT_ZEROSHOT_H_
#define INTENTKIT_ZEROSHOT_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "intentkit/corpus.h"
#include "intentkit/embedding.h"
#include "intentkit/kernels.h"
#include "intentkit/llm_gateway.h"

namespace intentkit {

inline constexpr std::string_view kZeroShotHeader =
    "The given sentence needs to be mapped to exactly one of the intents "
    "described below:";
inline constexpr std::string_view kNoneOptionDescription =
    "if the user sentence is not about any of the intents above";

struct ZeroShotConfig {
  bool use_filtering = false;
  int top_k = 5;
  bool include_none_option = true;
  GenerationParams generation = ZeroShotPreset();

  void Validate() const;
};

struct ParsedPrediction {
  std::optional<std::string> label;  // nullopt = out-of-scope
  std::optional<std::size_t> match_position;
  std::optional<std::size_t> matched_name_length;

  bool is_oos() const { return !label.has_value(); }
  bool operator==(const ParsedPrediction&) const = default;
};

// Layout, '\n'-separated:
//   <header>
//   (blank)
//   <name>: <description>        one per intent, in order
//   none_of_the_above: ...       only with include_none_option
//   (blank)
//   Sentence: <utterance>
//   Intent:
// No trailing newline. Throws InvalidArgument on empty input or an intent
// named none_of_the_above while the option is on.
std::string BuildZeroShotPrompt(std::span<const IntentSpec> intents,
                                std::string_view utterance,
                                bool include_none_option = true);

// Scans `completion` case-insensitively for every intent name and for
// none_of_the_above. The earliest occurrence wins; at equal positions the
// longer name wins. No occurrence, or a winning none_of_the_above, is
// out-of-scope (with no match position).
ParsedPrediction ParseCompletion(std::string_view completion,
                                 std::span<const std::string> intent_names);

// Ranks intents by the best cosine similarity between an utterance and any
// of the intent's few-shot examples. Example embeddings are computed once.
class IntentRetriever {
 public:
  // Throws InvalidArgument if an intent in `fewshot` has no examples.
  IntentRetriever(const FewShotSample& fewshot,
                  const EmbeddingProvider& provider,
                  kernels::Backend backend = kernels::Backend::kParallel);

  // At most k names, best first; ties by name ascending.
  std::vector<std::string> TopK(const EmbeddingVector& query,
                                std::size_t k) const;
  std::vector<std::vector<std::string>> TopKBatch(
      std::span<const EmbeddingVector> queries, std::size_t k) const;

  // Per-intent best similarity, aligned with intents().
  std::vector<double> Scores(const EmbeddingVector& query) const;

  const std::vector<std::string>& intents() const { return intents_; }

 private:
  std::vector<std::string> Rank(std::span<const double> scores,
                                std::size_t k) const;

  std::vector<std::string> intents_;
  std::vector<double> refs_;
  std::vector<std::size_t> group_of_;
  std::size_t dim_ = 0;
  kernels::Backend backend_;
};

std::vector<std::string> FilterIntents(const std::string& utterance,
                                       const FewShotSample& fewshot,
                                       const EmbeddingProvider& provider,
                                       std::size_t k);

struct ZeroShotOutcome {
  ParsedPrediction prediction;
  std::vector<std::string> prompt_intents;
  std::string prompt;
  std::string completion;
};

// Optional filtering, prompt construction, completion with the configured
// generation parameters, and parsing against the prompted names. The
// prompt carries descriptions only, never example utterances.
// `embedding_provider` and `fewshot` are required when filtering.
ZeroShotOutcome ClassifyZeroShot(const std::string& utterance,
                                 const Dataset& dataset,
                                 const ZeroShotConfig& config,
                                 const CompletionProvider& completion_provider,
                                 const EmbeddingProvider* embedding_provider,
                                 const FewShotSample* fewshot);

// Same as ClassifyZeroShot over many utterances, with at most `parallelism`
// requests in flight. Output order matches input order. Provider errors are
// rethrown with the failing utterance index in the message.
std::vector<ZeroShotOutcome> ClassifyZeroShotBatch(
    std::span<const std::string> utterances, const Dataset& dataset,
    const ZeroShotConfig& config, const CompletionProvider& completion_provider,
    const EmbeddingProvider* embedding_provider, const FewShotSample* fewshot,
    std::size_t parallelism = 1);

// One JSON line per utterance:
//   {"text", "gold", "predicted", "prompt_intents", "completion"}
// Out-of-scope labels are written as "__oos__".
std::string ZeroShotReportLine(const LabeledUtterance& row,
                               const ZeroShotOutcome& outcome);

}  // namespace intentkit

#endif  // INTENTKIT_ZEROSHOT_H_
