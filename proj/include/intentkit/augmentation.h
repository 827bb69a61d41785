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

#ifndef INTENTKIT_AUGMENTATION_H_
#define INTENTKIT_AUGMENTATION_H_

#include <map>
#include <string>
#include <vector>

#include "intentkit/corpus.h"
#include "intentkit/llm_gateway.h"

namespace intentkit {

enum class AugmentApproach { kParaphrase, kDescription };

std::string ApproachName(AugmentApproach approach);
AugmentApproach ParseApproach(const std::string& name);

struct AugConfig {
  int n_generate = 20;
  bool include_seed = false;
  int seed_size = 5;
  GenerationParams generation = AugmentationPreset();
  std::size_t parallelism = 1;

  void Validate() const;
};

struct GeneratedUtterance {
  std::string text;
  std::string intent;
  AugmentApproach approach = AugmentApproach::kParaphrase;
  std::string raw_line;
};

// Task: Create diverse utterances
// by paraphrasing the following utterances:
// <seed 1>
// ...
// Create <n> utterances:
std::string BuildParaphrasePrompt(const std::vector<std::string>& seeds, int n);

// A virtual assistant serves multiple intents.
// Below are the description of the intents:
// <name>: <description>       every intent
// Generate <n> utterances for <target> intent:
// Throws InvalidArgument when `target` is not among `intents`.
std::string BuildDescriptionAugPrompt(const std::vector<IntentSpec>& intents,
                                      const std::string& target, int n);

struct ParsedLine {
  std::string text;
  std::string raw_line;
};

// Splits lines, strips enumeration prefixes (repeatedly, so the result is a
// fixed point), trims, drops empties, removes case-insensitive duplicates
// keeping the first, and keeps at most n_max lines.
std::vector<ParsedLine> ParseGeneratedLines(const std::string& completion,
                                            int n_max);
std::vector<std::string> ParseGenerated(const std::string& completion,
                                        int n_max);

struct AugmentError {
  std::string intent;
  std::string message;
};

struct AugmentResult {
  AugmentApproach approach = AugmentApproach::kParaphrase;
  int n_generate = 0;
  bool include_seed = false;
  // Training set: per intent in dataset order, generated lines then (with
  // include_seed) the seed utterances.
  std::vector<LabeledUtterance> utterances;
  std::vector<GeneratedUtterance> generated;
  std::map<std::string, std::size_t> per_intent_counts;
  std::vector<AugmentError> errors;
};

// For every intent: build the approach's prompt, complete it, parse and
// label the lines. Provider failures are recorded per intent and the
// remaining intents still run. Output order does not depend on completion
// arrival order.
AugmentResult AugmentDataset(const FewShotSample& seed, const Dataset& dataset,
                             const CompletionProvider& provider,
                             const AugConfig& config, AugmentApproach approach);

// {"approach", "n_generate", "include_seed", "per_intent_counts", "errors"}
std::string AugmentManifestJson(const AugmentResult& result);

// Writes <dir>/train.jsonl and <dir>/manifest.json.
void ExportAugmented(const AugmentResult& result, const std::string& dir);

}  // namespace intentkit

#endif  // INTENTKIT_AUGMENTATION_H_
