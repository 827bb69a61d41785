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

#include "intentkit/llm_gateway.h"

#include <algorithm>
#include <cmath>

#include "intentkit/error.h"
#include "intentkit/rng.h"

namespace intentkit {

GenerationParams ZeroShotPreset() {
  GenerationParams p;
  p.temperature = 0.0;
  p.top_p = 1.0;
  p.max_tokens = 20;
  return p;
}

GenerationParams AugmentationPreset() {
  GenerationParams p;
  p.temperature = 0.9;
  p.top_p = 0.95;
  p.max_tokens = 512;
  return p;
}

void CompletionRequest::Validate() const {
  if (prompt.empty()) throw InvalidArgument("completion prompt is empty");
  if (!(params.temperature >= 0.0) || !std::isfinite(params.temperature)) {
    throw InvalidArgument("temperature must be >= 0");
  }
  if (!(params.top_p > 0.0 && params.top_p <= 1.0)) {
    throw InvalidArgument("top_p must be in (0, 1]");
  }
  if (params.max_tokens && *params.max_tokens < 1) {
    throw InvalidArgument("max_tokens must be positive");
  }
}

double TokenLogProbs::Sum() const {
  double s = 0.0;
  for (double lp : logprobs) s += lp;
  return s;
}

double TokenLogProbs::Mean() const {
  if (logprobs.empty()) {
    throw InvalidArgument("mean log-probability of an empty target");
  }
  return Sum() / static_cast<double>(logprobs.size());
}

CompletionResult CompletionProvider::Complete(
    const CompletionRequest& request) const {
  request.Validate();
  requests_.fetch_add(1);
  const auto start = std::chrono::steady_clock::now();
  CompletionResult result;
  try {
    result.text = DoComplete(request);
  } catch (const ProviderError&) {
    throw;
  } catch (const std::exception& e) {
    throw ProviderError(ProviderErrorKind::kTransport, id(), "complete",
                        e.what());
  }
  result.provider_id = id();
  result.latency = std::chrono::steady_clock::now() - start;
  return result;
}

TokenLogProbs CompletionProvider::ScoreTarget(const std::string& prompt,
                                              const std::string& target) const {
  if (target.empty()) throw InvalidArgument("scoring target is empty");
  if (!supports_scoring()) {
    throw ProviderError(ProviderErrorKind::kUnsupported, id(), "score_target",
                        "provider has no scoring capability");
  }
  requests_.fetch_add(1);
  TokenLogProbs out;
  out.target = target;
  try {
    out.logprobs = DoScore(prompt, target);
  } catch (const ProviderError&) {
    throw;
  } catch (const std::exception& e) {
    throw ProviderError(ProviderErrorKind::kTransport, id(), "score_target",
                        e.what());
  }
  if (out.logprobs.empty()) {
    throw ProviderError(ProviderErrorKind::kMalformedResponse, id(),
                        "score_target", "no log-probabilities returned");
  }
  for (double lp : out.logprobs) {
    if (!std::isfinite(lp) || lp > 0.0) {
      throw ProviderError(ProviderErrorKind::kMalformedResponse, id(),
                          "score_target",
                          "log-probability " + std::to_string(lp) +
                              " is not a finite value <= 0");
    }
  }
  return out;
}

std::vector<double> CompletionProvider::DoScore(const std::string&,
                                                const std::string&) const {
  throw ProviderError(ProviderErrorKind::kUnsupported, id(), "score_target",
                      "provider has no scoring capability");
}

std::vector<std::string> MockTokenize(const std::string& target) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : target) {
    if ((c == '_' || c == ' ') && !current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
    current += c;
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

double MockTokenLogProb(const std::string& prompt, const std::string& token) {
  const std::uint64_t h = Fnv1a64(token, Fnv1a64(prompt) ^ 0x1F);
  SplitMix64 mix(h);
  const double u = static_cast<double>(mix.Next() >> 11) * 0x1.0p-53;
  return -5.0 + 4.95 * u;
}

namespace {

std::vector<double> MockScore(const std::string& prompt,
                              const std::string& target, bool preferred) {
  std::vector<double> out;
  for (const auto& token : MockTokenize(target)) {
    out.push_back(preferred ? kPreferredTokenLogProb
                            : MockTokenLogProb(prompt, token));
  }
  return out;
}

constexpr std::string_view kSentenceTag = "Sentence: ";
constexpr std::string_view kIntentTag = "\nIntent:";

}  // namespace

void ScriptedCompletionProvider::AddExact(std::string prompt,
                                          std::string completion) {
  exact_[std::move(prompt)] = std::move(completion);
}

void ScriptedCompletionProvider::AddPattern(const std::string& regex,
                                            std::string completion) {
  patterns_.emplace_back(std::regex(regex), std::move(completion));
}

std::string ScriptedCompletionProvider::DoComplete(
    const CompletionRequest& request) const {
  if (auto it = exact_.find(request.prompt); it != exact_.end()) {
    return it->second;
  }
  for (const auto& [re, completion] : patterns_) {
    if (std::regex_search(request.prompt, re)) return completion;
  }
  return fallback_;
}

std::vector<double> ScriptedCompletionProvider::DoScore(
    const std::string& prompt, const std::string& target) const {
  return MockScore(prompt, target, preferred_.contains(target));
}

std::string EchoAugmentationProvider::DoComplete(
    const CompletionRequest& request) const {
  constexpr std::string_view kParaphraseHead =
      "Task: Create diverse utterances\nby paraphrasing the following "
      "utterances:\n";
  constexpr std::string_view kDescriptionHead =
      "A virtual assistant serves multiple intents.\n";
  const std::string& prompt = request.prompt;
  std::vector<std::string> lines;
  if (prompt.starts_with(kParaphraseHead)) {
    std::size_t pos = kParaphraseHead.size();
    while (pos < prompt.size()) {
      std::size_t end = prompt.find('\n', pos);
      if (end == std::string::npos) break;  // final "Create N utterances:"
      const std::string seed = prompt.substr(pos, end - pos);
      lines.push_back(seed);
      lines.push_back("please " + seed);
      pos = end + 1;
    }
  } else if (prompt.starts_with(kDescriptionHead)) {
    const std::string marker = "\nGenerate ";
    const std::size_t gen = prompt.rfind(marker);
    const std::string tail = " intent:";
    if (gen == std::string::npos || !prompt.ends_with(tail)) return "";
    const std::size_t for_pos = prompt.find(" utterances for ", gen);
    if (for_pos == std::string::npos) return "";
    const std::size_t name_begin = for_pos + 16;
    const std::string target =
        prompt.substr(name_begin, prompt.size() - tail.size() - name_begin);
    const std::string needle = "\n" + target + ": ";
    const std::size_t line = prompt.find(needle);
    if (line == std::string::npos) return "";
    const std::size_t desc_begin = line + needle.size();
    const std::string desc =
        prompt.substr(desc_begin, prompt.find('\n', desc_begin) - desc_begin);
    lines = {desc, "i need help: " + desc, "can you " + desc,
             "help me, " + desc};
  }
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out += std::to_string(i + 1) + ". " + lines[i] + "\n";
  }
  return out;
}

std::optional<std::string> ExtractPromptSentence(const std::string& prompt) {
  std::size_t pos = prompt.rfind(kSentenceTag);
  while (pos != std::string::npos && pos > 0 && prompt[pos - 1] != '\n') {
    pos = prompt.rfind(kSentenceTag, pos - 1);
  }
  if (pos == std::string::npos) return std::nullopt;
  const std::size_t begin = pos + kSentenceTag.size();
  const std::size_t end = prompt.rfind(kIntentTag);
  if (end == std::string::npos || end < begin) return std::nullopt;
  return prompt.substr(begin, end - begin);
}

std::vector<std::string> ExtractPromptIntents(const std::string& prompt) {
  std::vector<std::string> names;
  std::size_t start = prompt.find('\n');
  while (start != std::string::npos && start < prompt.size()) {
    const std::size_t line_begin = start + 1;
    std::size_t line_end = prompt.find('\n', line_begin);
    if (line_end == std::string::npos) line_end = prompt.size();
    const std::string_view line(prompt.data() + line_begin,
                                line_end - line_begin);
    if (line.starts_with(kSentenceTag)) break;
    const std::size_t colon = line.find(": ");
    if (colon != std::string_view::npos && colon > 0) {
      names.emplace_back(line.substr(0, colon));
    }
    start = line_end;
  }
  return names;
}

OracleCompletionProvider::OracleCompletionProvider(const Dataset& dataset,
                                                   bool constrain_to_prompt,
                                                   std::string id)
    : id_(std::move(id)), constrain_(constrain_to_prompt) {
  for (const auto* split : {&dataset.test(), &dataset.train()}) {
    for (const auto& row : *split) gold_.try_emplace(row.text, row.intent);
  }
}

std::optional<std::optional<std::string>> OracleCompletionProvider::GoldFor(
    const std::string& prompt) const {
  auto sentence = ExtractPromptSentence(prompt);
  if (!sentence) return std::nullopt;
  auto it = gold_.find(*sentence);
  if (it == gold_.end()) return std::nullopt;
  return it->second;
}

std::string OracleCompletionProvider::DoComplete(
    const CompletionRequest& request) const {
  auto gold = GoldFor(request.prompt);
  if (!gold) return "";
  if (!gold->has_value()) return std::string(kNoneOfTheAbove);
  const std::string& name = **gold;
  if (constrain_) {
    const auto listed = ExtractPromptIntents(request.prompt);
    if (std::find(listed.begin(), listed.end(), name) == listed.end()) {
      return std::string(kNoneOfTheAbove);
    }
  }
  return name;
}

std::vector<double> OracleCompletionProvider::DoScore(
    const std::string& prompt, const std::string& target) const {
  auto gold = GoldFor(prompt);
  const bool preferred = gold && gold->has_value() && **gold == target;
  return MockScore(prompt, target, preferred);
}

}  // namespace intentkit
