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

#ifndef INTENTKIT_CORPUS_H_
#define INTENTKIT_CORPUS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace intentkit {

// Label used in dataset files for out-of-scope utterances.
inline constexpr std::string_view kOosFileLabel = "__oos__";
// Label offered to language models for out-of-scope utterances.
inline constexpr std::string_view kNoneOfTheAbove = "none_of_the_above";

struct IntentSpec {
  std::string name;
  std::string description;

  bool operator==(const IntentSpec&) const = default;
};

// An utterance with an intent label, or no label for out-of-scope.
struct LabeledUtterance {
  std::string text;
  std::optional<std::string> intent;

  bool is_oos() const { return !intent.has_value(); }
  bool operator==(const LabeledUtterance&) const = default;
};

// Immutable after construction; Validate() establishes the invariants.
class Dataset {
 public:
  Dataset() = default;
  // Throws InvalidArgument if any invariant is violated.
  Dataset(std::string name, std::vector<IntentSpec> intents,
          std::vector<LabeledUtterance> train,
          std::vector<LabeledUtterance> test);

  const std::string& name() const { return name_; }
  const std::vector<IntentSpec>& intents() const { return intents_; }
  const std::vector<LabeledUtterance>& train() const { return train_; }
  const std::vector<LabeledUtterance>& test() const { return test_; }

  // True iff at least one test utterance is out-of-scope.
  bool has_oos() const;

  // Position of `intent` in intents(), if present (exact, case-sensitive).
  std::optional<std::size_t> IntentIndex(std::string_view intent) const;
  const IntentSpec* FindIntent(std::string_view intent) const;

  std::vector<std::string> IntentNames() const;

 private:
  std::string name_;
  std::vector<IntentSpec> intents_;
  std::vector<LabeledUtterance> train_;
  std::vector<LabeledUtterance> test_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Checks name rules: non-empty, no newline, no surrounding whitespace,
// not a reserved label. Returns an error message or nullopt.
std::optional<std::string> CheckIntentName(std::string_view name);

struct IntentExamples {
  std::string intent;
  std::vector<LabeledUtterance> utterances;
};

// K utterances per intent drawn from the train split. `per_intent` follows
// the dataset's intent order and covers every intent, possibly with an empty
// list when the intent has no train data.
struct FewShotSample {
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<IntentExamples> per_intent;

  const std::vector<LabeledUtterance>* Find(std::string_view intent) const;
  std::size_t TotalSize() const;
  std::vector<LabeledUtterance> Flatten() const;

  bool operator==(const FewShotSample& other) const;
};

// Reads intents.json, train.jsonl and test.jsonl from `dir`. test.jsonl may
// be absent, in which case the test split is empty. Throws DatasetError.
Dataset LoadDataset(const std::string& dir);

// Writes the same layout LoadDataset reads. Creates `dir` if needed.
void SaveDataset(const Dataset& dataset, const std::string& dir);

// Reads a train.jsonl-format file whose labels must be intents of
// `dataset` (or "__oos__" when allow_oos). Throws DatasetError.
std::vector<LabeledUtterance> LoadUtterancesJsonl(const std::string& path,
                                                  const Dataset& dataset,
                                                  bool allow_oos);

// JSONL in the train.jsonl format.
std::string FormatUtterancesJsonl(const std::vector<LabeledUtterance>& rows);
void WriteUtterancesJsonl(const std::vector<LabeledUtterance>& rows,
                          const std::string& path);

// For each intent, candidates are taken in record order and a partial
// Fisher-Yates prefix of length min(k, n) is drawn with SplitMix64 seeded
// by DeriveSeed(seed, intent name). Each intent has its own stream, so a
// k-sample is a prefix of the (k+1)-sample under the same seed.
FewShotSample SampleFewShot(const Dataset& dataset, int k, std::uint64_t seed);

struct DatasetStats {
  std::size_t intent_count = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t oos_count = 0;
  // Aligned with Dataset::intents().
  std::vector<std::size_t> train_per_intent;
  std::vector<std::size_t> test_per_intent;
};

DatasetStats ComputeStats(const Dataset& dataset);

}  // namespace intentkit

#endif  // INTENTKIT_CORPUS_H_
