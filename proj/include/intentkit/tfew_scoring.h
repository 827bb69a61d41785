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

#ifndef INTENTKIT_TFEW_SCORING_H_
#define INTENTKIT_TFEW_SCORING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "intentkit/corpus.h"
#include "intentkit/llm_gateway.h"

namespace intentkit {

// Cap applied to exp(logprob) inside log(1 - p) for wrong candidates.
inline constexpr double kUnlikelihoodProbCap = 1.0 - 1e-7;

// Mean negative log-likelihood over the target's tokens:
//   -(1/T) * sum_t logp_t
// Throws InvalidArgument on an empty token list.
double LmLoss(const TokenLogProbs& correct);

// Token-averaged unlikelihood over incorrect candidates:
//   -(sum_n sum_t log(1 - min(exp(logp_nt), cap))) / (sum_n T_n)
// 0 for an empty list (or one with no tokens).
double UnlikelihoodLoss(std::span<const TokenLogProbs> incorrect);

// Softmax cross-entropy over the candidates' mean log-probabilities:
//   -log(exp(b_correct) / sum_c exp(b_c)),  b_c = mean logp of candidate c
// Throws InvalidArgument if correct_index is out of range.
double LengthNormalizedLoss(std::span<const TokenLogProbs> candidates,
                            std::size_t correct_index);
// Same, locating `correct` among `candidates` by address.
double LengthNormalizedLoss(const TokenLogProbs& correct,
                            std::span<const TokenLogProbs> candidates);

// softmax of the candidates' mean log-probabilities.
std::vector<double> CandidateSoftmax(std::span<const TokenLogProbs> candidates);

struct TFewLossBundle {
  double lm = 0.0;
  double unlikelihood = 0.0;
  double length_normalized = 0.0;
  double total = 0.0;
};

// lm on the correct candidate, unlikelihood on every other candidate,
// length-normalized over all of them.
TFewLossBundle ComputeTFewLosses(std::span<const TokenLogProbs> candidates,
                                 std::size_t correct_index);

struct CandidateScore {
  std::string label;
  TokenLogProbs logprobs;
  double mean_logprob = 0.0;
  double lm_loss = 0.0;
};

struct RankResult {
  std::string predicted;
  std::vector<CandidateScore> candidates;  // input intent order
};

// Scores each intent name as the continuation of `prompt` and returns the
// highest mean log-probability; ties go to the smaller name. Requires a
// provider with scoring capability.
RankResult RankClassify(const std::string& prompt,
                        std::span<const IntentSpec> intents,
                        const CompletionProvider& scorer);

// Elementwise activations * scales. Throws on length mismatch.
std::vector<double> Ia3Apply(std::span<const double> activations,
                             std::span<const double> scales);

// Returns all intents when there are at most `limit`; otherwise the gold
// intent (if given and present) plus a seeded uniform subset of the rest,
// `limit` in total, in their original order.
std::vector<IntentSpec> CapPromptIntents(std::span<const IntentSpec> intents,
                                         std::size_t limit,
                                         const std::optional<std::string>& gold,
                                         std::uint64_t seed);

// {"text", "candidates": [{"label", "mean_logprob", "lm_loss"}],
//  "predicted", "ln_loss_of_gold"}; ln_loss_of_gold is null for
// out-of-scope or unlisted gold.
std::string ScoringReportLine(const LabeledUtterance& row,
                              const RankResult& result);

}  // namespace intentkit

#endif  // INTENTKIT_TFEW_SCORING_H_
