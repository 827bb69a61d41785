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

#ifndef INTENTKIT_TESTS_TEST_SUPPORT_H_
#define INTENTKIT_TESTS_TEST_SUPPORT_H_

// Shared fixtures: a synthetic keyword-cluster dataset and scratch dirs.

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include "intentkit/corpus.h"
#include "intentkit/rng.h"

namespace intentkit::testing {

struct KeywordIntent {
  const char* name;
  const char* description;
  std::vector<std::string> keywords;
};

inline const std::vector<KeywordIntent>& KeywordIntents() {
  static const std::vector<KeywordIntent> kIntents = {
      {"alarm_set", "set an alarm",
       {"alarm", "wake", "morning", "ring", "buzzer", "snooze"}},
      {"alarm_remove", "remove an alarm",
       {"cancel", "delete", "remove", "disable", "erase", "abort"}},
      {"weather_query", "ask about the weather",
       {"weather", "rain", "forecast", "sunny", "umbrella", "humidity"}},
      {"play_music", "play a song or music",
       {"song", "music", "playlist", "album", "track", "melody"}},
      {"calendar_set", "add an event to the calendar",
       {"meeting", "calendar", "schedule", "appointment", "agenda", "event"}},
      {"email_sendemail", "send an email",
       {"email", "inbox", "compose", "mail", "recipient", "attachment"}},
      {"takeaway_order", "order takeaway food",
       {"pizza", "burger", "delivery", "takeaway", "sushi", "noodles"}},
      {"iot_hue_lightoff", "turn the lights off",
       {"lights", "lamp", "dim", "bulb", "brightness", "darken"}},
      {"transport_ticket", "book a train ticket",
       {"ticket", "railway", "booking", "seat", "journey", "platform"}},
      {"news_query", "ask for the news",
       {"news", "headlines", "politics", "article", "journalist",
        "bulletin"}},
  };
  return kIntents;
}

inline const std::vector<std::string>& FillerWords() {
  static const std::vector<std::string> kFiller = {
      "please", "can", "you", "the", "my", "for", "me", "now",
      "today",  "i",   "want", "to", "a", "hey", "would", "like"};
  return kFiller;
}

inline const std::vector<std::string>& OffTopicWords() {
  static const std::vector<std::string> kWords = {
      "giraffe", "volcano", "quantum", "origami", "saxophone", "glacier",
      "pyramid", "octopus", "galaxy",  "cactus",  "velvet",    "zeppelin"};
  return kWords;
}

// Three of the intent's keywords plus two filler words, shuffled.
inline std::string KeywordUtterance(const std::vector<std::string>& keywords,
                                    SplitMix64& rng) {
  std::vector<std::string> pool = keywords;
  ShufflePrefix(pool, 3, rng);
  std::vector<std::string> words(pool.begin(), pool.begin() + 3);
  for (int i = 0; i < 2; ++i) {
    words.push_back(FillerWords()[rng.Below(FillerWords().size())]);
  }
  ShufflePrefix(words, words.size(), rng);
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

// `intents` keyword intents with `per_intent` utterances each; the first
// `train_per_intent` go to train, the rest to test. `oos_test` off-topic
// rows are appended to test. Utterances are unique.
inline Dataset MakeKeywordDataset(std::size_t intents = 10,
                                  std::size_t per_intent = 30,
                                  std::size_t train_per_intent = 20,
                                  std::size_t oos_test = 20,
                                  std::uint64_t seed = 7) {
  SplitMix64 rng(seed);
  std::vector<IntentSpec> specs;
  std::vector<LabeledUtterance> train, test;
  std::vector<std::string> seen;
  auto fresh = [&](const std::vector<std::string>& words) {
    for (;;) {
      std::string u = KeywordUtterance(words, rng);
      if (std::find(seen.begin(), seen.end(), u) == seen.end()) {
        seen.push_back(u);
        return u;
      }
    }
  };
  const auto& all = KeywordIntents();
  for (std::size_t i = 0; i < intents && i < all.size(); ++i) {
    specs.push_back({all[i].name, all[i].description});
    for (std::size_t j = 0; j < per_intent; ++j) {
      LabeledUtterance row{fresh(all[i].keywords), std::string(all[i].name)};
      (j < train_per_intent ? train : test).push_back(std::move(row));
    }
  }
  for (std::size_t j = 0; j < oos_test; ++j) {
    test.push_back({fresh(OffTopicWords()), std::nullopt});
  }
  return Dataset("keywords", std::move(specs), std::move(train),
                 std::move(test));
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path ScratchDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("intentkit_" + tag + "_" + std::to_string(::getpid()) +
                    "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string TestData(const std::string& rel) {
  return std::string(INTENTKIT_TEST_DATA) + "/" + rel;
}

}  // namespace intentkit::testing

#endif  // INTENTKIT_TESTS_TEST_SUPPORT_H_
