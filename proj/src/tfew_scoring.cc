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

#include "intentkit/tfew_scoring.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "intentkit/error.h"
#include "intentkit/rng.h"

namespace intentkit {

double LmLoss(const TokenLogProbs& correct) {
  if (correct.logprobs.empty()) {
    throw InvalidArgument("lm loss of an empty target");
  }
  return -correct.Mean();
}

double UnlikelihoodLoss(std::span<const TokenLogProbs> incorrect) {
  double sum = 0.0;
  std::size_t tokens = 0;
  for (const auto& cand : incorrect) {
    for (double lp : cand.logprobs) {
      const double p = std::min(std::exp(lp), kUnlikelihoodProbCap);
      sum += std::log1p(-p);
      ++tokens;
    }
  }
  if (tokens == 0) return 0.0;
  return -sum / static_cast<double>(tokens);
}

std::vector<double> CandidateSoftmax(std::span<const TokenLogProbs> candidates) {
  std::vector<double> beta;
  beta.reserve(candidates.size());
  for (const auto& c : candidates) beta.push_back(c.Mean());
  if (beta.empty()) return beta;
  const double m = *std::max_element(beta.begin(), beta.end());
  double sum = 0.0;
  for (double& b : beta) {
    b = std::exp(b - m);
    sum += b;
  }
  for (double& b : beta) b /= sum;
  return beta;
}

double LengthNormalizedLoss(std::span<const TokenLogProbs> candidates,
                            std::size_t correct_index) {
  if (correct_index >= candidates.size()) {
    throw InvalidArgument("correct candidate is not among the candidates");
  }
  double m = -INFINITY;
  std::vector<double> beta;
  beta.reserve(candidates.size());
  for (const auto& c : candidates) {
    beta.push_back(c.Mean());
    m = std::max(m, beta.back());
  }
  double sum = 0.0;
  for (double b : beta) sum += std::exp(b - m);
  return std::max(0.0, std::log(sum) + (m - beta[correct_index]));
}

double LengthNormalizedLoss(const TokenLogProbs& correct,
                            std::span<const TokenLogProbs> candidates) {
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (&candidates[i] == &correct) return LengthNormalizedLoss(candidates, i);
  }
  throw InvalidArgument("correct candidate is not among the candidates");
}

TFewLossBundle ComputeTFewLosses(std::span<const TokenLogProbs> candidates,
                                 std::size_t correct_index) {
  if (correct_index >= candidates.size()) {
    throw InvalidArgument("correct candidate is not among the candidates");
  }
  std::vector<TokenLogProbs> incorrect;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (i != correct_index) incorrect.push_back(candidates[i]);
  }
  TFewLossBundle out;
  out.lm = LmLoss(candidates[correct_index]);
  out.unlikelihood = UnlikelihoodLoss(incorrect);
  out.length_normalized = LengthNormalizedLoss(candidates, correct_index);
  out.total = out.lm + out.unlikelihood + out.length_normalized;
  return out;
}

RankResult RankClassify(const std::string& prompt,
                        std::span<const IntentSpec> intents,
                        const CompletionProvider& scorer) {
  if (intents.empty()) throw InvalidArgument("rank classification needs intents");
  if (!scorer.supports_scoring()) {
    throw ProviderError(ProviderErrorKind::kUnsupported, scorer.id(),
                        "score_target", "provider has no scoring capability");
  }
  RankResult result;
  result.candidates.reserve(intents.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < intents.size(); ++i) {
    CandidateScore c;
    c.label = intents[i].name;
    c.logprobs = scorer.ScoreTarget(prompt, intents[i].name);
    c.mean_logprob = c.logprobs.Mean();
    c.lm_loss = LmLoss(c.logprobs);
    result.candidates.push_back(std::move(c));
    const auto& cur = result.candidates.back();
    const auto& top = result.candidates[best];
    if (cur.mean_logprob > top.mean_logprob ||
        (cur.mean_logprob == top.mean_logprob && cur.label < top.label)) {
      best = i;
    }
  }
  result.predicted = result.candidates[best].label;
  return result;
}

std::vector<double> Ia3Apply(std::span<const double> activations,
                             std::span<const double> scales) {
  if (activations.size() != scales.size()) {
    throw InvalidArgument("IA3 scales length " + std::to_string(scales.size()) +
                          " does not match activations length " +
                          std::to_string(activations.size()));
  }
  std::vector<double> out(activations.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = activations[i] * scales[i];
  }
  return out;
}

std::vector<IntentSpec> CapPromptIntents(std::span<const IntentSpec> intents,
                                         std::size_t limit,
                                         const std::optional<std::string>& gold,
                                         std::uint64_t seed) {
  if (limit < 1) throw InvalidArgument("intent limit must be >= 1");
  if (intents.size() <= limit) {
    return std::vector<IntentSpec>(intents.begin(), intents.end());
  }
  std::vector<char> keep(intents.size(), 0);
  std::vector<std::size_t> pool;
  std::size_t need = limit;
  for (std::size_t i = 0; i < intents.size(); ++i) {
    if (gold && intents[i].name == *gold && need == limit) {
      keep[i] = 1;
      --need;
    } else {
      pool.push_back(i);
    }
  }
  SplitMix64 rng(seed);
  ShufflePrefix(pool, need, rng);
  for (std::size_t j = 0; j < need && j < pool.size(); ++j) keep[pool[j]] = 1;

  std::vector<IntentSpec> out;
  out.reserve(limit);
  for (std::size_t i = 0; i < intents.size(); ++i) {
    if (keep[i]) out.push_back(intents[i]);
  }
  return out;
}

std::string ScoringReportLine(const LabeledUtterance& row,
                              const RankResult& result) {
  nlohmann::ordered_json j;
  j["text"] = row.text;
  nlohmann::ordered_json cands = nlohmann::ordered_json::array();
  std::vector<TokenLogProbs> lps;
  std::optional<std::size_t> gold_index;
  for (std::size_t i = 0; i < result.candidates.size(); ++i) {
    const auto& c = result.candidates[i];
    cands.push_back({{"label", c.label},
                     {"mean_logprob", c.mean_logprob},
                     {"lm_loss", c.lm_loss}});
    lps.push_back(c.logprobs);
    if (!row.is_oos() && c.label == *row.intent) gold_index = i;
  }
  j["candidates"] = cands;
  j["predicted"] = result.predicted;
  if (gold_index) {
    j["ln_loss_of_gold"] = LengthNormalizedLoss(lps, *gold_index);
  } else {
    j["ln_loss_of_gold"] = nullptr;
  }
  return j.dump() + "\n";
}

}  // namespace intentkit
