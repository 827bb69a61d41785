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

#include "intentkit/augmentation.h"

#include <filesystem>
#include <unordered_set>

#include "json.hpp"
#include "intentkit/error.h"
#include "intentkit/text_util.h"

namespace intentkit {

std::string ApproachName(AugmentApproach approach) {
  return approach == AugmentApproach::kParaphrase ? "paraphrase"
                                                  : "description";
}

AugmentApproach ParseApproach(const std::string& name) {
  if (name == "paraphrase") return AugmentApproach::kParaphrase;
  if (name == "description") return AugmentApproach::kDescription;
  throw InvalidArgument("unknown augmentation approach '" + name + "'");
}

void AugConfig::Validate() const {
  if (n_generate < 1) throw InvalidArgument("n_generate must be >= 1");
  if (seed_size < 1) throw InvalidArgument("seed_size must be >= 1");
}

std::string BuildParaphrasePrompt(const std::vector<std::string>& seeds,
                                  int n) {
  if (seeds.empty()) throw InvalidArgument("paraphrase prompt needs seeds");
  std::string prompt =
      "Task: Create diverse utterances\n"
      "by paraphrasing the following utterances:\n";
  for (const auto& s : seeds) {
    prompt += s;
    prompt += '\n';
  }
  prompt += "Create " + std::to_string(n) + " utterances:";
  return prompt;
}

std::string BuildDescriptionAugPrompt(const std::vector<IntentSpec>& intents,
                                      const std::string& target, int n) {
  bool found = false;
  std::string prompt =
      "A virtual assistant serves multiple intents.\n"
      "Below are the description of the intents:\n";
  for (const auto& spec : intents) {
    found = found || spec.name == target;
    prompt += spec.name + ": " + spec.description + "\n";
  }
  if (!found) {
    throw InvalidArgument("target intent '" + target + "' is not described");
  }
  prompt += "Generate " + std::to_string(n) + " utterances for " + target +
            " intent:";
  return prompt;
}

namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
}

// One application of ^\s*(\d+[.)]|[-*•])\s*. Returns false if no match.
bool StripEnumerationOnce(std::string_view& line) {
  std::size_t i = 0;
  while (i < line.size() && IsSpace(line[i])) ++i;
  std::size_t j = i;
  while (j < line.size() && line[j] >= '0' && line[j] <= '9') ++j;
  std::size_t end;
  if (j > i && j < line.size() && (line[j] == '.' || line[j] == ')')) {
    end = j + 1;
  } else if (i < line.size() && (line[i] == '-' || line[i] == '*')) {
    end = i + 1;
  } else if (line.substr(i).starts_with("\xE2\x80\xA2")) {
    end = i + 3;
  } else {
    return false;
  }
  while (end < line.size() && IsSpace(line[end])) ++end;
  line.remove_prefix(end);
  return true;
}

}  // namespace

std::vector<ParsedLine> ParseGeneratedLines(const std::string& completion,
                                            int n_max) {
  std::vector<ParsedLine> out;
  if (n_max < 1) return out;
  std::unordered_set<std::string> seen;
  for (const auto& raw : SplitLines(completion)) {
    std::string_view line = raw;
    while (StripEnumerationOnce(line)) {
    }
    line = TrimWhitespace(line);
    if (line.empty()) continue;
    if (!seen.insert(AsciiLower(line)).second) continue;
    out.push_back({std::string(line), raw});
    if (out.size() == static_cast<std::size_t>(n_max)) break;
  }
  return out;
}

std::vector<std::string> ParseGenerated(const std::string& completion,
                                        int n_max) {
  std::vector<std::string> out;
  for (auto& line : ParseGeneratedLines(completion, n_max)) {
    out.push_back(std::move(line.text));
  }
  return out;
}

AugmentResult AugmentDataset(const FewShotSample& seed, const Dataset& dataset,
                             const CompletionProvider& provider,
                             const AugConfig& config,
                             AugmentApproach approach) {
  config.Validate();
  const auto& intents = dataset.intents();

  struct Slot {
    std::vector<ParsedLine> lines;
    std::optional<std::string> error;
  };
  std::vector<Slot> slots(intents.size());

  BoundedParallelFor(intents.size(), config.parallelism, [&](std::size_t i) {
    const std::string& name = intents[i].name;
    try {
      std::string prompt;
      if (approach == AugmentApproach::kParaphrase) {
        const auto* seeds = seed.Find(name);
        if (seeds == nullptr || seeds->empty()) {
          slots[i].error = "no seed utterances to paraphrase";
          return;
        }
        std::vector<std::string> texts;
        for (const auto& u : *seeds) texts.push_back(u.text);
        prompt = BuildParaphrasePrompt(texts, config.n_generate);
      } else {
        prompt = BuildDescriptionAugPrompt(intents, name, config.n_generate);
      }
      const auto result = provider.Complete({prompt, config.generation});
      slots[i].lines = ParseGeneratedLines(result.text, config.n_generate);
    } catch (const Error& e) {
      slots[i].error = e.what();
    }
  });

  AugmentResult result;
  result.approach = approach;
  result.n_generate = config.n_generate;
  result.include_seed = config.include_seed;
  for (std::size_t i = 0; i < intents.size(); ++i) {
    const std::string& name = intents[i].name;
    if (slots[i].error) result.errors.push_back({name, *slots[i].error});
    result.per_intent_counts[name] = slots[i].lines.size();
    for (auto& line : slots[i].lines) {
      result.utterances.push_back({line.text, name});
      result.generated.push_back(
          {std::move(line.text), name, approach, std::move(line.raw_line)});
    }
    if (config.include_seed) {
      if (const auto* seeds = seed.Find(name)) {
        result.utterances.insert(result.utterances.end(), seeds->begin(),
                                 seeds->end());
      }
    }
  }
  return result;
}

std::string AugmentManifestJson(const AugmentResult& result) {
  nlohmann::ordered_json j;
  j["approach"] = ApproachName(result.approach);
  j["n_generate"] = result.n_generate;
  j["include_seed"] = result.include_seed;
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (const auto& [name, count] : result.per_intent_counts) counts[name] = count;
  j["per_intent_counts"] = counts;
  nlohmann::ordered_json errors = nlohmann::ordered_json::array();
  for (const auto& e : result.errors) {
    errors.push_back({{"intent", e.intent}, {"message", e.message}});
  }
  j["errors"] = errors;
  return j.dump(2) + "\n";
}

void ExportAugmented(const AugmentResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  WriteUtterancesJsonl(result.utterances, dir + "/train.jsonl");
  WriteFile(dir + "/manifest.json", AugmentManifestJson(result));
}

}  // namespace intentkit
