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

#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "intentkit/error.h"
#include "intentkit/rng.h"
#include "intentkit/tfew_scoring.h"
#include "intentkit/zeroshot.h"
#include "test_support.h"

using namespace intentkit;
using intentkit::testing::MakeKeywordDataset;

namespace {

TokenLogProbs T(std::vector<double> lp, std::string target = "t") {
  return {std::move(target), std::move(lp)};
}

std::vector<IntentSpec> ManyIntents(std::size_t n) {
  std::vector<IntentSpec> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({"intent_" + std::to_string(100 + i), "d"});
  }
  return out;
}

}  // namespace

TEST_CASE("lm loss") {
  CHECK(LmLoss(T({-1.0, -2.0})) == doctest::Approx(1.5));
  CHECK(LmLoss(T({0.0})) == 0.0);
  CHECK(LmLoss(T({-0.5, -0.5, -0.5})) == doctest::Approx(0.5));
  CHECK_THROWS_AS(LmLoss(T({})), InvalidArgument);
}

TEST_CASE("unlikelihood loss") {
  CHECK(UnlikelihoodLoss({}) == 0.0);
  const double half = std::log(0.5);
  const std::vector<TokenLogProbs> one = {T({half})};
  CHECK(UnlikelihoodLoss(one) == doctest::Approx(std::log(2.0)));
  const std::vector<TokenLogProbs> two = {T({half}), T({half, half})};
  CHECK(UnlikelihoodLoss(two) == doctest::Approx(std::log(2.0)));
  // A certain token on a wrong candidate is clamped, not infinite.
  const std::vector<TokenLogProbs> certain = {T({0.0})};
  CHECK(UnlikelihoodLoss(certain) ==
        doctest::Approx(-std::log(1.0 - kUnlikelihoodProbCap)));
}

TEST_CASE("length-normalized loss") {
  const std::vector<TokenLogProbs> single = {T({-3.0})};
  CHECK(LengthNormalizedLoss(single, 0) == doctest::Approx(0.0));
  const std::vector<TokenLogProbs> pair = {T({-1.0}), T({-2.0, -2.0})};
  CHECK(LengthNormalizedLoss(pair, 0) ==
        doctest::Approx(std::log(1.0 + std::exp(-1.0))));
  CHECK(LengthNormalizedLoss(pair[0], pair) ==
        doctest::Approx(0.31326168751822286));
  const std::vector<TokenLogProbs> even = {T({-1.0, -3.0}), T({-2.0})};
  CHECK(LengthNormalizedLoss(even, 1) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(LengthNormalizedLoss(pair, 2), InvalidArgument);
  const TokenLogProbs stranger = T({-1.0});
  CHECK_THROWS_AS(LengthNormalizedLoss(stranger, pair), InvalidArgument);
}

TEST_CASE("loss properties on random candidates") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<TokenLogProbs> cands;
    const std::size_t n = 1 + rng.Below(6);
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<double> lp(1 + rng.Below(4));
      for (double& x : lp) x = rng.Uniform(-30.0, -1e-9);
      cands.push_back(T(lp, "c" + std::to_string(c)));
    }
    const std::size_t correct = rng.Below(n);

    const auto probs = CandidateSoftmax(cands);
    double sum = 0.0;
    for (double p : probs) sum += p;
    CHECK(std::abs(sum - 1.0) < 1e-9);

    const auto b = ComputeTFewLosses(cands, correct);
    CHECK(std::isfinite(b.lm));
    CHECK(std::isfinite(b.unlikelihood));
    CHECK(std::isfinite(b.length_normalized));
    CHECK(b.lm >= 0.0);
    CHECK(b.unlikelihood >= 0.0);
    CHECK(b.length_normalized >= 0.0);
    CHECK(b.total == doctest::Approx(b.lm + b.unlikelihood + b.length_normalized));

    // Permuting the candidates leaves the loss of the same candidate unchanged.
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    ShufflePrefix(perm, n, rng);
    std::vector<TokenLogProbs> shuffled;
    std::size_t moved = 0;
    for (std::size_t i = 0; i < n; ++i) {
      shuffled.push_back(cands[perm[i]]);
      if (perm[i] == correct) moved = i;
    }
    CHECK(LengthNormalizedLoss(shuffled, moved) ==
          doctest::Approx(b.length_normalized).epsilon(1e-12));
  }
  CHECK(LmLoss(T({-1e-9, 0.0})) > 0.0);
}

TEST_CASE("ia3 scaling") {
  const std::vector<double> a = {2.0, -3.0};
  CHECK(Ia3Apply(a, std::vector<double>{1.0, 1.0}) == a);
  CHECK(Ia3Apply(a, std::vector<double>{0.0, 0.0}) ==
        std::vector<double>{0.0, 0.0});
  CHECK(Ia3Apply(a, std::vector<double>{0.5, 2.0}) ==
        std::vector<double>{1.0, -6.0});
  CHECK_THROWS_AS(Ia3Apply(a, std::vector<double>{1.0}), InvalidArgument);
}

TEST_CASE("capping prompt intents") {
  const auto sixty = ManyIntents(60);
  const std::string gold = sixty[42].name;
  const auto capped = CapPromptIntents(sixty, 15, gold, 5);
  CHECK(capped.size() == 15);
  CHECK(std::find(capped.begin(), capped.end(), sixty[42]) != capped.end());
  std::set<std::string> names;
  for (const auto& c : capped) names.insert(c.name);
  CHECK(names.size() == 15);
  // Original order preserved.
  for (std::size_t i = 1; i < capped.size(); ++i) {
    CHECK(capped[i - 1].name < capped[i].name);
  }
  CHECK(CapPromptIntents(sixty, 15, gold, 5) == capped);
  CHECK_FALSE(CapPromptIntents(sixty, 15, gold, 6) == capped);

  const auto nine = ManyIntents(9);
  CHECK(CapPromptIntents(nine, 15, std::nullopt, 1) == nine);
  CHECK(CapPromptIntents(sixty, 15, std::nullopt, 1).size() == 15);
  CHECK(CapPromptIntents(sixty, 15, std::string("missing"), 1).size() == 15);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto c = CapPromptIntents(sixty, 3, sixty[seed % 60].name, seed);
    CHECK(std::find(c.begin(), c.end(), sixty[seed % 60]) != c.end());
  }
}

TEST_CASE("rank classification matches brute force") {
  const std::vector<IntentSpec> intents = {{"alarm_set", "a"},
                                           {"weather_query", "w"},
                                           {"news", "n"}};
  const ScriptedCompletionProvider mock;
  for (const std::string sentence : {"wake me", "rain today", "headlines",
                                     "foo bar", "what now"}) {
    const std::string prompt = BuildZeroShotPrompt(intents, sentence, false);
    const RankResult r = RankClassify(prompt, intents, mock);
    REQUIRE(r.candidates.size() == 3);
    std::string best;
    double best_mean = -1e300;
    for (std::size_t i = 0; i < intents.size(); ++i) {
      double sum = 0.0;
      const auto tokens = MockTokenize(intents[i].name);
      for (const auto& tok : tokens) sum += MockTokenLogProb(prompt, tok);
      const double mean = sum / tokens.size();
      CHECK(r.candidates[i].label == intents[i].name);
      CHECK(r.candidates[i].mean_logprob == doctest::Approx(mean));
      CHECK(r.candidates[i].lm_loss == doctest::Approx(-mean));
      if (mean > best_mean) {
        best_mean = mean;
        best = intents[i].name;
      }
    }
    CHECK(r.predicted == best);
  }
}

TEST_CASE("rank classification edge cases") {
  const std::vector<IntentSpec> one = {{"alarm_set", "a"}};
  const ScriptedCompletionProvider mock;
  CHECK(RankClassify("p", one, mock).predicted == "alarm_set");

  ScriptedCompletionProvider tied;
  tied.Prefer("b_b");
  tied.Prefer("a_a");
  const std::vector<IntentSpec> two = {{"b_b", ""}, {"a_a", ""}};
  CHECK(RankClassify("p", two, tied).predicted == "a_a");

  const EchoAugmentationProvider cannot;
  CHECK_THROWS_AS(RankClassify("p", one, cannot), ProviderError);
  CHECK_THROWS_AS(RankClassify("p", {}, mock), InvalidArgument);
}

TEST_CASE("rank classification is shift invariant for equal lengths") {
  // Candidates with equal token counts: shifting every logprob by the same
  // constant moves every mean equally, so the argmax is unchanged.
  class Shifted : public CompletionProvider {
   public:
    explicit Shifted(double shift) : shift_(shift) {}
    std::string id() const override { return "shifted"; }
    bool supports_scoring() const override { return true; }

   protected:
    std::string DoComplete(const CompletionRequest&) const override {
      return "";
    }
    std::vector<double> DoScore(const std::string& prompt,
                                const std::string& target) const override {
      std::vector<double> out;
      for (const auto& tok : MockTokenize(target)) {
        out.push_back(MockTokenLogProb(prompt, tok) + shift_);
      }
      return out;
    }

   private:
    double shift_;
  };
  const std::vector<IntentSpec> intents = {
      {"alarm_set", ""}, {"music_play", ""}, {"email_send", ""}, {"iot_on", ""}};
  const Shifted base(0.0), shifted(-1.7);
  for (int i = 0; i < 20; ++i) {
    const std::string prompt = "prompt " + std::to_string(i);
    CHECK(RankClassify(prompt, intents, base).predicted ==
          RankClassify(prompt, intents, shifted).predicted);
  }
}

TEST_CASE("oracle scoring recovers gold for every test utterance") {
  const Dataset ds = MakeKeywordDataset(10, 25, 20, 0);
  const OracleCompletionProvider oracle(ds);
  for (const auto& row : ds.test()) {
    const std::string prompt =
        BuildZeroShotPrompt(ds.intents(), row.text, false);
    CHECK(RankClassify(prompt, ds.intents(), oracle).predicted == *row.intent);
  }
}

TEST_CASE("scoring report line") {
  const std::vector<IntentSpec> intents = {{"a_x", ""}, {"b_y", ""}};
  ScriptedCompletionProvider mock;
  mock.Prefer("a_x");
  const RankResult r = RankClassify("prompt", intents, mock);
  const auto j = nlohmann::json::parse(
      ScoringReportLine({"hello", std::string("a_x")}, r));
  CHECK(j["text"] == "hello");
  CHECK(j["predicted"] == "a_x");
  REQUIRE(j["candidates"].size() == 2);
  CHECK(j["candidates"][0]["label"] == "a_x");
  CHECK(j["candidates"][0]["mean_logprob"].get<double>() ==
        doctest::Approx(kPreferredTokenLogProb));
  std::vector<TokenLogProbs> cands = {r.candidates[0].logprobs,
                                      r.candidates[1].logprobs};
  CHECK(j["ln_loss_of_gold"].get<double>() ==
        doctest::Approx(LengthNormalizedLoss(cands, 0)));
  const auto oos = nlohmann::json::parse(
      ScoringReportLine({"hello", std::nullopt}, r));
  CHECK(oos["ln_loss_of_gold"].is_null());
}
