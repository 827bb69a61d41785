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

#ifndef INTENTKIT_LLM_GATEWAY_H_
#define INTENTKIT_LLM_GATEWAY_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "intentkit/corpus.h"

namespace intentkit {

struct GenerationParams {
  double temperature = 0.0;
  double top_p = 1.0;
  std::optional<int> max_tokens;  // nullopt = backend default / unlimited
  std::vector<std::string> stop_sequences;

  bool operator==(const GenerationParams&) const = default;
};

// Greedy decoding capped at 20 tokens.
GenerationParams ZeroShotPreset();
// Diverse sampling: temperature 0.9, top_p 0.95, cap 512 tokens.
GenerationParams AugmentationPreset();

struct CompletionRequest {
  std::string prompt;
  GenerationParams params;

  // Throws InvalidArgument: empty prompt, temperature < 0, top_p outside
  // (0, 1], max_tokens < 1.
  void Validate() const;
};

struct CompletionResult {
  std::string text;
  std::string provider_id;
  std::chrono::nanoseconds latency{0};
};

// Per-token log-probabilities of `target` as a continuation of a prompt.
struct TokenLogProbs {
  std::string target;
  std::vector<double> logprobs;

  double Sum() const;
  // Sum / token count. Throws InvalidArgument when empty.
  double Mean() const;
};

// Text generation and target scoring backend. Subclasses implement the Do*
// hooks; the public entry points validate, time and count requests and make
// sure every failure surfaces as a ProviderError carrying id() and the
// operation name. Implementations must tolerate concurrent calls.
class CompletionProvider {
 public:
  virtual ~CompletionProvider() = default;

  virtual std::string id() const = 0;
  virtual bool supports_scoring() const { return false; }

  // Returns the backend text verbatim.
  CompletionResult Complete(const CompletionRequest& request) const;

  // Throws ProviderError(kUnsupported) when the backend cannot score.
  TokenLogProbs ScoreTarget(const std::string& prompt,
                            const std::string& target) const;

  std::uint64_t request_count() const { return requests_.load(); }

 protected:
  virtual std::string DoComplete(const CompletionRequest& request) const = 0;
  virtual std::vector<double> DoScore(const std::string& prompt,
                                      const std::string& target) const;

 private:
  mutable std::atomic<std::uint64_t> requests_{0};
};

// Mock tokenizer: a new token starts at every '_' or ' ' (the delimiter is
// kept at the front of the token it starts). "alarm_set" -> {"alarm", "_set"}.
std::vector<std::string> MockTokenize(const std::string& target);

// Deterministic pseudo log-probability in [-5, -0.05) from a hash of
// (prompt, token).
double MockTokenLogProb(const std::string& prompt, const std::string& token);

// Log-probability every token of a preferred target receives from the mocks.
inline constexpr double kPreferredTokenLogProb = -0.01;

// Canned completions keyed by exact prompt, then by regex (first match in
// insertion order), then a fallback text ("" unless changed). Scoring uses
// the hash pseudo-logprobs, with preferred targets pinned to
// kPreferredTokenLogProb per token. Configure before sharing across threads.
class ScriptedCompletionProvider : public CompletionProvider {
 public:
  explicit ScriptedCompletionProvider(std::string id = "scripted-mock")
      : id_(std::move(id)) {}

  std::string id() const override { return id_; }
  bool supports_scoring() const override { return true; }

  void AddExact(std::string prompt, std::string completion);
  void AddPattern(const std::string& regex, std::string completion);
  void SetFallback(std::string text) { fallback_ = std::move(text); }
  void Prefer(std::string target) { preferred_.insert(std::move(target)); }

 protected:
  std::string DoComplete(const CompletionRequest& request) const override;
  std::vector<double> DoScore(const std::string& prompt,
                              const std::string& target) const override;

 private:
  std::string id_;
  std::unordered_map<std::string, std::string> exact_;
  std::vector<std::pair<std::regex, std::string>> patterns_;
  std::string fallback_;
  std::unordered_set<std::string> preferred_;
};

// Answers zero-shot prompts with the gold label of the sentence they embed,
// looked up among the dataset's test and train utterances (test first).
//  - in-scope gold listed in the prompt          -> gold intent name
//  - in-scope gold not listed, constrained mode  -> none_of_the_above
//  - in-scope gold not listed, unconstrained     -> gold intent name
//  - out-of-scope gold                           -> none_of_the_above
//  - unknown sentence                            -> "" (empty)
// Scoring prefers the gold name of the embedded sentence.
class OracleCompletionProvider : public CompletionProvider {
 public:
  explicit OracleCompletionProvider(const Dataset& dataset,
                                    bool constrain_to_prompt = true,
                                    std::string id = "oracle-mock");

  std::string id() const override { return id_; }
  bool supports_scoring() const override { return true; }

  // Gold label of the sentence in a zero-shot prompt, if known. The outer
  // optional is empty for unknown sentences; the inner for out-of-scope.
  std::optional<std::optional<std::string>> GoldFor(
      const std::string& prompt) const;

 protected:
  std::string DoComplete(const CompletionRequest& request) const override;
  std::vector<double> DoScore(const std::string& prompt,
                              const std::string& target) const override;

 private:
  std::string id_;
  bool constrain_;
  std::unordered_map<std::string, std::optional<std::string>> gold_;
};

// Hermetic stand-in for a generator. For a paraphrase prompt it returns the
// seed lines, each in its original form and with a "please" variant, as a
// numbered list; for a description prompt it returns numbered variations of
// the target intent's description. Anything else gets "".
class EchoAugmentationProvider : public CompletionProvider {
 public:
  explicit EchoAugmentationProvider(std::string id = "echo-mock")
      : id_(std::move(id)) {}

  std::string id() const override { return id_; }

 protected:
  std::string DoComplete(const CompletionRequest& request) const override;

 private:
  std::string id_;
};

// Extracts the sentence of a zero-shot prompt: the text after the last
// "Sentence: " line start and before the trailing "\nIntent:".
std::optional<std::string> ExtractPromptSentence(const std::string& prompt);

// Intent names listed as "<name>: ..." lines in a zero-shot prompt's
// description block (between the header and the sentence).
std::vector<std::string> ExtractPromptIntents(const std::string& prompt);

// Runs fn(i) for i in [0, n) on at most `max_in_flight` threads. Each index
// runs exactly once. If any call throws, the first exception (lowest index)
// is rethrown after all threads finish.
template <typename Fn>
void BoundedParallelFor(std::size_t n, std::size_t max_in_flight, Fn&& fn) {
  if (n == 0) return;
  if (max_in_flight <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min(max_in_flight, n);
  std::atomic<std::size_t> next{0};
  std::mutex error_mu;
  std::exception_ptr error;
  std::size_t error_index = n;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (i < error_index) {
            error_index = i;
            error = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace intentkit

#endif  // INTENTKIT_LLM_GATEWAY_H_
