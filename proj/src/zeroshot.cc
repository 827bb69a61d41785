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

#include "intentkit/zeroshot.h"

#include <algorithm>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "intentkit/error.h"
#include "intentkit/text_util.h"

namespace intentkit {

void ZeroShotConfig::Validate() const {
  if (top_k < 1) throw InvalidArgument("top_k must be >= 1");
}

std::string BuildZeroShotPrompt(std::span<const IntentSpec> intents,
                                std::string_view utterance,
                                bool include_none_option) {
  if (intents.empty()) throw InvalidArgument("zero-shot prompt needs intents");
  if (utterance.empty()) throw InvalidArgument("zero-shot utterance is empty");
  std::string prompt(kZeroShotHeader);
  prompt += "\n\n";
  for (const auto& intent : intents) {
    if (include_none_option && intent.name == kNoneOfTheAbove) {
      throw InvalidArgument(
          "intent 'none_of_the_above' collides with the none option");
    }
    prompt += intent.name;
    prompt += ": ";
    prompt += intent.description;
    prompt += '\n';
  }
  if (include_none_option) {
    prompt += kNoneOfTheAbove;
    prompt += ": ";
    prompt += kNoneOptionDescription;
    prompt += '\n';
  }
  prompt += "\nSentence: ";
  prompt += utterance;
  prompt += "\nIntent:";
  return prompt;
}

ParsedPrediction ParseCompletion(std::string_view completion,
                                 std::span<const std::string> intent_names) {
  const std::string haystack = AsciiLower(completion);
  std::size_t best_pos = std::string::npos;
  std::size_t best_len = 0;
  const std::string* best_name = nullptr;
  bool best_is_none = false;

  auto consider = [&](const std::string& name, bool is_none) {
    if (name.empty()) return;
    const std::size_t pos = haystack.find(AsciiLower(name));
    if (pos == std::string::npos) return;
    if (pos < best_pos || (pos == best_pos && name.size() > best_len)) {
      best_pos = pos;
      best_len = name.size();
      best_name = &name;
      best_is_none = is_none;
    }
  };
  static const std::string kNone(kNoneOfTheAbove);
  for (const auto& name : intent_names) {
    consider(name, AsciiLower(name) == kNone);
  }
  consider(kNone, true);

  ParsedPrediction out;
  if (best_name == nullptr || best_is_none) return out;
  out.label = *best_name;
  out.match_position = best_pos;
  out.matched_name_length = best_len;
  return out;
}

IntentRetriever::IntentRetriever(const FewShotSample& fewshot,
                                 const EmbeddingProvider& provider,
                                 kernels::Backend backend)
    : backend_(backend) {
  std::vector<std::string> texts;
  for (std::size_t g = 0; g < fewshot.per_intent.size(); ++g) {
    const auto& entry = fewshot.per_intent[g];
    if (entry.utterances.empty()) {
      throw InvalidArgument("intent '" + entry.intent +
                            "' has no examples for similarity filtering");
    }
    intents_.push_back(entry.intent);
    for (const auto& u : entry.utterances) {
      texts.push_back(u.text);
      group_of_.push_back(g);
    }
  }
  dim_ = provider.dimension();
  const auto vectors = provider.EmbedBatch(texts);
  refs_.reserve(vectors.size() * dim_);
  for (const auto& v : vectors) {
    if (v.dim() != dim_) throw InvalidArgument("embedding dimension mismatch");
    refs_.insert(refs_.end(), v.values.begin(), v.values.end());
  }
}

std::vector<double> IntentRetriever::Scores(const EmbeddingVector& query) const {
  if (query.dim() != dim_) throw InvalidArgument("query dimension mismatch");
  std::vector<double> scores(intents_.size());
  kernels::MaxDotByGroup(backend_, query.values, 1, refs_, group_of_,
                         intents_.size(), dim_, scores);
  return scores;
}

std::vector<std::string> IntentRetriever::Rank(std::span<const double> scores,
                                               std::size_t k) const {
  std::vector<std::size_t> order(intents_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return intents_[a] < intents_[b];
  });
  order.resize(std::min(k, order.size()));
  std::vector<std::string> names;
  names.reserve(order.size());
  for (std::size_t i : order) names.push_back(intents_[i]);
  return names;
}

std::vector<std::string> IntentRetriever::TopK(const EmbeddingVector& query,
                                               std::size_t k) const {
  return Rank(Scores(query), k);
}

std::vector<std::vector<std::string>> IntentRetriever::TopKBatch(
    std::span<const EmbeddingVector> queries, std::size_t k) const {
  const std::size_t groups = intents_.size();
  std::vector<double> packed;
  packed.reserve(queries.size() * dim_);
  for (const auto& q : queries) {
    if (q.dim() != dim_) throw InvalidArgument("query dimension mismatch");
    packed.insert(packed.end(), q.values.begin(), q.values.end());
  }
  std::vector<double> scores(queries.size() * groups);
  kernels::MaxDotByGroup(backend_, packed, queries.size(), refs_, group_of_,
                         groups, dim_, scores);
  std::vector<std::vector<std::string>> out;
  out.reserve(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    out.push_back(Rank(std::span<const double>(scores).subspan(q * groups,
                                                                groups),
                       k));
  }
  return out;
}

std::vector<std::string> FilterIntents(const std::string& utterance,
                                       const FewShotSample& fewshot,
                                       const EmbeddingProvider& provider,
                                       std::size_t k) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  IntentRetriever retriever(fewshot, provider);
  return retriever.TopK(provider.Embed(utterance), k);
}

namespace {

ZeroShotOutcome ClassifyWithIntents(const std::string& utterance,
                                    std::vector<IntentSpec> prompt_intents,
                                    const ZeroShotConfig& config,
                                    const CompletionProvider& provider) {
  ZeroShotOutcome out;
  out.prompt =
      BuildZeroShotPrompt(prompt_intents, utterance, config.include_none_option);
  for (const auto& spec : prompt_intents) out.prompt_intents.push_back(spec.name);

  CompletionRequest request{out.prompt, config.generation};
  out.completion = provider.Complete(request).text;
  out.prediction = ParseCompletion(out.completion, out.prompt_intents);
  return out;
}

std::vector<IntentSpec> SpecsFor(const Dataset& dataset,
                                 const std::vector<std::string>& names) {
  std::vector<IntentSpec> specs;
  specs.reserve(names.size());
  for (const auto& name : names) {
    const IntentSpec* spec = dataset.FindIntent(name);
    if (spec == nullptr) {
      throw InvalidArgument("few-shot intent '" + name +
                            "' is not in the dataset");
    }
    specs.push_back(*spec);
  }
  return specs;
}

void CheckFilteringInputs(const ZeroShotConfig& config,
                          const EmbeddingProvider* embedding_provider,
                          const FewShotSample* fewshot) {
  config.Validate();
  if (config.use_filtering && (embedding_provider == nullptr || !fewshot)) {
    throw InvalidArgument(
        "intent filtering needs an embedding provider and a few-shot sample");
  }
}

}  // namespace

ZeroShotOutcome ClassifyZeroShot(const std::string& utterance,
                                 const Dataset& dataset,
                                 const ZeroShotConfig& config,
                                 const CompletionProvider& completion_provider,
                                 const EmbeddingProvider* embedding_provider,
                                 const FewShotSample* fewshot) {
  CheckFilteringInputs(config, embedding_provider, fewshot);
  std::vector<IntentSpec> intents = dataset.intents();
  if (config.use_filtering) {
    intents = SpecsFor(dataset,
                       FilterIntents(utterance, *fewshot, *embedding_provider,
                                     static_cast<std::size_t>(config.top_k)));
  }
  try {
    return ClassifyWithIntents(utterance, std::move(intents), config,
                               completion_provider);
  } catch (const ProviderError& e) {
    throw ProviderError(e.kind(), e.provider_id(), e.operation(),
                        std::string(e.what()) + " [utterance: " + utterance +
                            "]");
  }
}

std::vector<ZeroShotOutcome> ClassifyZeroShotBatch(
    std::span<const std::string> utterances, const Dataset& dataset,
    const ZeroShotConfig& config, const CompletionProvider& completion_provider,
    const EmbeddingProvider* embedding_provider, const FewShotSample* fewshot,
    std::size_t parallelism) {
  CheckFilteringInputs(config, embedding_provider, fewshot);
  std::vector<std::vector<IntentSpec>> prompt_intents(utterances.size());
  if (config.use_filtering) {
    IntentRetriever retriever(*fewshot, *embedding_provider);
    const auto queries = embedding_provider->EmbedBatch(utterances);
    const auto ranked = retriever.TopKBatch(
        queries, static_cast<std::size_t>(config.top_k));
    for (std::size_t i = 0; i < utterances.size(); ++i) {
      prompt_intents[i] = SpecsFor(dataset, ranked[i]);
    }
  } else {
    for (auto& p : prompt_intents) p = dataset.intents();
  }

  std::vector<ZeroShotOutcome> out(utterances.size());
  BoundedParallelFor(utterances.size(), parallelism, [&](std::size_t i) {
    try {
      out[i] = ClassifyWithIntents(utterances[i], std::move(prompt_intents[i]),
                                   config, completion_provider);
    } catch (const ProviderError& e) {
      throw ProviderError(e.kind(), e.provider_id(), e.operation(),
                          std::string(e.what()) + " [utterance #" +
                              std::to_string(i) + ": " + utterances[i] + "]");
    }
  });
  return out;
}

std::string ZeroShotReportLine(const LabeledUtterance& row,
                               const ZeroShotOutcome& outcome) {
  nlohmann::ordered_json j;
  j["text"] = row.text;
  j["gold"] = row.is_oos() ? std::string(kOosFileLabel) : *row.intent;
  j["predicted"] = outcome.prediction.is_oos()
                       ? std::string(kOosFileLabel)
                       : *outcome.prediction.label;
  j["prompt_intents"] = outcome.prompt_intents;
  j["completion"] = outcome.completion;
  return j.dump() + "\n";
}

}  // namespace intentkit
