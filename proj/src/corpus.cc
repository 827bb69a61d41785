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

#include "intentkit/corpus.h"

#include <filesystem>
#include <fstream>
#include <unordered_set>

#include "json.hpp"
#include "intentkit/error.h"
#include "intentkit/rng.h"
#include "intentkit/text_util.h"

namespace intentkit {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::optional<std::string> CheckIntentName(std::string_view name) {
  if (name.empty()) return "intent name is empty";
  if (name.find('\n') != std::string_view::npos ||
      name.find('\r') != std::string_view::npos) {
    return "intent name contains a newline";
  }
  if (TrimWhitespace(name).size() != name.size()) {
    return "intent name has leading or trailing whitespace: '" +
           std::string(name) + "'";
  }
  if (AsciiLower(name) == kNoneOfTheAbove) {
    return "intent name '" + std::string(name) + "' is reserved";
  }
  if (name == kOosFileLabel) {
    return "intent name '" + std::string(name) + "' is reserved";
  }
  return std::nullopt;
}

Dataset::Dataset(std::string name, std::vector<IntentSpec> intents,
                 std::vector<LabeledUtterance> train,
                 std::vector<LabeledUtterance> test)
    : name_(std::move(name)),
      intents_(std::move(intents)),
      train_(std::move(train)),
      test_(std::move(test)) {
  if (intents_.empty()) throw InvalidArgument("dataset has no intents");
  std::unordered_set<std::string> folded;
  for (std::size_t i = 0; i < intents_.size(); ++i) {
    const std::string& n = intents_[i].name;
    if (auto problem = CheckIntentName(n)) throw InvalidArgument(*problem);
    if (!folded.insert(AsciiLower(n)).second) {
      throw InvalidArgument("duplicate intent name '" + n + "'");
    }
    index_.emplace(n, i);
  }
  auto check = [&](const std::vector<LabeledUtterance>& rows, bool is_train) {
    for (const auto& row : rows) {
      if (row.text.empty()) throw InvalidArgument("utterance text is empty");
      if (row.is_oos()) {
        if (is_train) {
          throw InvalidArgument("train utterance carries the OOS label: '" +
                                row.text + "'");
        }
        continue;
      }
      if (!index_.contains(*row.intent)) {
        throw InvalidArgument("unknown intent label '" + *row.intent + "'");
      }
    }
  };
  check(train_, true);
  check(test_, false);
}

bool Dataset::has_oos() const {
  for (const auto& row : test_) {
    if (row.is_oos()) return true;
  }
  return false;
}

std::optional<std::size_t> Dataset::IntentIndex(std::string_view intent) const {
  auto it = index_.find(std::string(intent));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const IntentSpec* Dataset::FindIntent(std::string_view intent) const {
  auto idx = IntentIndex(intent);
  return idx ? &intents_[*idx] : nullptr;
}

std::vector<std::string> Dataset::IntentNames() const {
  std::vector<std::string> names;
  names.reserve(intents_.size());
  for (const auto& spec : intents_) names.push_back(spec.name);
  return names;
}

const std::vector<LabeledUtterance>* FewShotSample::Find(
    std::string_view intent) const {
  for (const auto& entry : per_intent) {
    if (entry.intent == intent) return &entry.utterances;
  }
  return nullptr;
}

std::size_t FewShotSample::TotalSize() const {
  std::size_t total = 0;
  for (const auto& entry : per_intent) total += entry.utterances.size();
  return total;
}

std::vector<LabeledUtterance> FewShotSample::Flatten() const {
  std::vector<LabeledUtterance> out;
  out.reserve(TotalSize());
  for (const auto& entry : per_intent) {
    out.insert(out.end(), entry.utterances.begin(), entry.utterances.end());
  }
  return out;
}

bool FewShotSample::operator==(const FewShotSample& other) const {
  if (k != other.k || seed != other.seed ||
      per_intent.size() != other.per_intent.size()) {
    return false;
  }
  for (std::size_t i = 0; i < per_intent.size(); ++i) {
    if (per_intent[i].intent != other.per_intent[i].intent ||
        per_intent[i].utterances != other.per_intent[i].utterances) {
      return false;
    }
  }
  return true;
}

namespace {

std::vector<IntentSpec> LoadIntents(const fs::path& path) {
  const std::string file = path.string();
  if (!fs::exists(path)) throw DatasetError(file, 0, "file not found");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(ReadFile(file));
  } catch (const nlohmann::json::parse_error& e) {
    throw DatasetError(file, 0, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_array()) throw DatasetError(file, 0, "expected a JSON array");
  if (doc.empty()) throw DatasetError(file, 0, "intents file is empty");

  std::vector<IntentSpec> intents;
  std::unordered_set<std::string> folded;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const std::string where = "intent #" + std::to_string(i + 1) + ": ";
    if (!item.is_object() || !item.contains("name") ||
        !item["name"].is_string()) {
      throw DatasetError(file, 0, where + "missing string field 'name'");
    }
    IntentSpec spec;
    spec.name = item["name"].get<std::string>();
    if (item.contains("description")) {
      if (!item["description"].is_string()) {
        throw DatasetError(file, 0, where + "'description' must be a string");
      }
      spec.description = item["description"].get<std::string>();
    }
    if (auto problem = CheckIntentName(spec.name)) {
      throw DatasetError(file, 0, where + *problem);
    }
    if (!folded.insert(AsciiLower(spec.name)).second) {
      throw DatasetError(file, 0,
                         where + "duplicate intent name '" + spec.name + "'");
    }
    intents.push_back(std::move(spec));
  }
  return intents;
}

std::vector<LabeledUtterance> LoadSplit(
    const fs::path& path, const std::unordered_set<std::string>& names,
    bool is_train) {
  const std::string file = path.string();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError(file, 0, "cannot open");

  std::vector<LabeledUtterance> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsBlank(line)) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DatasetError(file, line_no,
                         std::string("malformed record: ") + e.what());
    }
    if (!rec.is_object() || !rec.contains("text") || !rec["text"].is_string() ||
        !rec.contains("label") || !rec["label"].is_string()) {
      throw DatasetError(file, line_no,
                         "malformed record: expected string fields "
                         "'text' and 'label'");
    }
    LabeledUtterance row;
    row.text = rec["text"].get<std::string>();
    if (row.text.empty()) {
      throw DatasetError(file, line_no, "malformed record: empty text");
    }
    std::string label = rec["label"].get<std::string>();
    if (label == kOosFileLabel) {
      if (is_train) {
        throw DatasetError(file, line_no,
                           "out-of-scope label is not allowed in train");
      }
    } else {
      if (!names.contains(label)) {
        throw DatasetError(file, line_no,
                           "label '" + label + "' is not a known intent");
      }
      row.intent = std::move(label);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json UtteranceToJson(const LabeledUtterance& row) {
  ordered_json j;
  j["text"] = row.text;
  j["label"] = row.is_oos() ? std::string(kOosFileLabel) : *row.intent;
  return j;
}

}  // namespace

Dataset LoadDataset(const std::string& dir) {
  const fs::path root(dir);
  if (!fs::is_directory(root)) {
    throw DatasetError(dir, 0, "dataset directory not found");
  }
  std::vector<IntentSpec> intents = LoadIntents(root / "intents.json");
  std::unordered_set<std::string> names;
  for (const auto& spec : intents) names.insert(spec.name);

  const fs::path train_path = root / "train.jsonl";
  if (!fs::exists(train_path)) {
    throw DatasetError(train_path.string(), 0, "file not found");
  }
  auto train = LoadSplit(train_path, names, true);
  std::vector<LabeledUtterance> test;
  const fs::path test_path = root / "test.jsonl";
  if (fs::exists(test_path)) test = LoadSplit(test_path, names, false);

  std::string name = root.filename().string();
  if (name.empty()) name = root.parent_path().filename().string();
  return Dataset(std::move(name), std::move(intents), std::move(train),
                 std::move(test));
}

std::vector<LabeledUtterance> LoadUtterancesJsonl(const std::string& path,
                                                  const Dataset& dataset,
                                                  bool allow_oos) {
  const auto names = dataset.IntentNames();
  const std::unordered_set<std::string> known(names.begin(), names.end());
  return LoadSplit(path, known, !allow_oos);
}

std::string FormatUtterancesJsonl(const std::vector<LabeledUtterance>& rows) {
  std::string out;
  for (const auto& row : rows) {
    out += UtteranceToJson(row).dump();
    out += '\n';
  }
  return out;
}

void WriteUtterancesJsonl(const std::vector<LabeledUtterance>& rows,
                          const std::string& path) {
  WriteFile(path, FormatUtterancesJsonl(rows));
}

void SaveDataset(const Dataset& dataset, const std::string& dir) {
  const fs::path root(dir);
  fs::create_directories(root);
  ordered_json intents = ordered_json::array();
  for (const auto& spec : dataset.intents()) {
    intents.push_back({{"name", spec.name}, {"description", spec.description}});
  }
  WriteFile((root / "intents.json").string(), intents.dump(2) + "\n");
  WriteUtterancesJsonl(dataset.train(), (root / "train.jsonl").string());
  WriteUtterancesJsonl(dataset.test(), (root / "test.jsonl").string());
}

FewShotSample SampleFewShot(const Dataset& dataset, int k,
                            std::uint64_t seed) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  std::vector<std::vector<std::size_t>> candidates(dataset.intents().size());
  const auto& train = dataset.train();
  for (std::size_t i = 0; i < train.size(); ++i) {
    candidates[*dataset.IntentIndex(*train[i].intent)].push_back(i);
  }

  FewShotSample sample;
  sample.k = k;
  sample.seed = seed;
  sample.per_intent.reserve(dataset.intents().size());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const std::string& intent = dataset.intents()[c].name;
    std::vector<std::size_t>& pool = candidates[c];
    const std::size_t take = std::min<std::size_t>(k, pool.size());
    SplitMix64 rng(DeriveSeed(seed, intent));
    ShufflePrefix(pool, take, rng);

    IntentExamples entry{intent, {}};
    entry.utterances.reserve(take);
    for (std::size_t j = 0; j < take; ++j) {
      entry.utterances.push_back(train[pool[j]]);
    }
    sample.per_intent.push_back(std::move(entry));
  }
  return sample;
}

DatasetStats ComputeStats(const Dataset& dataset) {
  DatasetStats stats;
  stats.intent_count = dataset.intents().size();
  stats.train_size = dataset.train().size();
  stats.test_size = dataset.test().size();
  stats.train_per_intent.assign(stats.intent_count, 0);
  stats.test_per_intent.assign(stats.intent_count, 0);
  for (const auto& row : dataset.train()) {
    ++stats.train_per_intent[*dataset.IntentIndex(*row.intent)];
  }
  for (const auto& row : dataset.test()) {
    if (row.is_oos()) {
      ++stats.oos_count;
    } else {
      ++stats.test_per_intent[*dataset.IntentIndex(*row.intent)];
    }
  }
  return stats;
}

}  // namespace intentkit
