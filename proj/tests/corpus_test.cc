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

#include <filesystem>
#include <set>

#include "doctest.h"
#include "intentkit/corpus.h"
#include "intentkit/error.h"
#include "intentkit/text_util.h"
#include "test_support.h"

using namespace intentkit;
using intentkit::testing::MakeKeywordDataset;
using intentkit::testing::ScratchDir;
using intentkit::testing::TestData;

namespace {

void WriteDataset(const std::filesystem::path& dir, const std::string& intents,
                  const std::string& train, const std::string* test = nullptr) {
  std::filesystem::create_directories(dir);
  WriteFile((dir / "intents.json").string(), intents);
  WriteFile((dir / "train.jsonl").string(), train);
  if (test) WriteFile((dir / "test.jsonl").string(), *test);
}

const char* kTwoIntents =
    R"([{"name": "a_x", "description": "first"}, {"name": "b_y"}])";

}  // namespace

TEST_CASE("load mini fixture") {
  const Dataset ds = LoadDataset(TestData("mini"));
  CHECK(ds.name() == "mini");
  CHECK(ds.intents().size() == 3);
  CHECK(ds.intents()[0].name == "alarm_set");
  CHECK(ds.intents()[0].description == "set an alarm");
  CHECK(ds.train().size() == 8);
  CHECK(ds.test().size() == 4);
  CHECK(ds.has_oos());
  CHECK(ds.test().back().is_oos());
  CHECK(ds.IntentIndex("weather_query") == 2);
  CHECK_FALSE(ds.IntentIndex("Weather_Query").has_value());
}

TEST_CASE("stats match the loaded splits") {
  const Dataset ds = LoadDataset(TestData("mini"));
  const DatasetStats st = ComputeStats(ds);
  CHECK(st.intent_count == 3);
  CHECK(st.train_size == 8);
  CHECK(st.test_size == 4);
  CHECK(st.oos_count == 1);
  CHECK(st.train_per_intent == std::vector<std::size_t>{3, 2, 3});
  CHECK(st.test_per_intent == std::vector<std::size_t>{1, 1, 1});
}

TEST_CASE("save then load round-trips") {
  const Dataset ds = MakeKeywordDataset(4, 6, 4, 3);
  const auto dir = ScratchDir("roundtrip") / "keywords";
  SaveDataset(ds, dir.string());
  const Dataset back = LoadDataset(dir.string());
  CHECK(back.name() == "keywords");
  CHECK(back.intents() == ds.intents());
  CHECK(back.train() == ds.train());
  CHECK(back.test() == ds.test());
}

TEST_CASE("utf-8 and escapes survive a round trip") {
  const Dataset ds("u", {{"café_order", "commander un café ☕"}},
                   {{"un \"grand\" café\tsvp", "café_order"}},
                   {{"naïve question", std::nullopt}});
  const auto dir = ScratchDir("utf8") / "u";
  SaveDataset(ds, dir.string());
  const Dataset back = LoadDataset(dir.string());
  CHECK(back.intents() == ds.intents());
  CHECK(back.train() == ds.train());
  CHECK(back.test() == ds.test());
}

TEST_CASE("test split is optional") {
  const auto dir = ScratchDir("notest");
  WriteDataset(dir, kTwoIntents, "{\"text\": \"hi\", \"label\": \"a_x\"}\n");
  const Dataset ds = LoadDataset(dir.string());
  CHECK(ds.test().empty());
  CHECK_FALSE(ds.has_oos());
}

TEST_CASE("load errors name the file and line") {
  const auto dir = ScratchDir("errors");

  SUBCASE("missing directory") {
    try {
      LoadDataset((dir / "nope").string());
      FAIL("expected DatasetError");
    } catch (const DatasetError& e) {
      CHECK(std::string(e.what()).find("nope") != std::string::npos);
    }
  }
  SUBCASE("missing train file") {
    std::filesystem::create_directories(dir / "d");
    WriteFile((dir / "d" / "intents.json").string(), kTwoIntents);
    CHECK_THROWS_AS(LoadDataset((dir / "d").string()), DatasetError);
  }
  SUBCASE("malformed jsonl line") {
    WriteDataset(dir / "d", kTwoIntents,
                 "{\"text\": \"ok\", \"label\": \"a_x\"}\n{not json\n");
    try {
      LoadDataset((dir / "d").string());
      FAIL("expected DatasetError");
    } catch (const DatasetError& e) {
      CHECK(e.line() == 2);
      CHECK(e.file().ends_with("train.jsonl"));
    }
  }
  SUBCASE("missing label field") {
    WriteDataset(dir / "d", kTwoIntents, "{\"text\": \"ok\"}\n");
    CHECK_THROWS_AS(LoadDataset((dir / "d").string()), DatasetError);
  }
  SUBCASE("unknown label") {
    WriteDataset(dir / "d", kTwoIntents,
                 "{\"text\": \"ok\", \"label\": \"zzz\"}\n");
    try {
      LoadDataset((dir / "d").string());
      FAIL("expected DatasetError");
    } catch (const DatasetError& e) {
      CHECK(e.line() == 1);
      CHECK(std::string(e.what()).find("zzz") != std::string::npos);
    }
  }
  SUBCASE("oos label in train") {
    WriteDataset(dir / "d", kTwoIntents,
                 "{\"text\": \"ok\", \"label\": \"__oos__\"}\n");
    CHECK_THROWS_AS(LoadDataset((dir / "d").string()), DatasetError);
  }
  SUBCASE("oos label in test is fine") {
    const std::string test = "{\"text\": \"meh\", \"label\": \"__oos__\"}\n";
    WriteDataset(dir / "d", kTwoIntents,
                 "{\"text\": \"ok\", \"label\": \"a_x\"}\n", &test);
    CHECK(LoadDataset((dir / "d").string()).has_oos());
  }
  SUBCASE("duplicate intent names, case-insensitively") {
    WriteDataset(dir / "d", R"([{"name": "a_x"}, {"name": "A_X"}])", "");
    CHECK_THROWS_AS(LoadDataset((dir / "d").string()), DatasetError);
  }
  SUBCASE("reserved intent name") {
    WriteDataset(dir / "d", R"([{"name": "None_Of_The_Above"}])", "");
    CHECK_THROWS_AS(LoadDataset((dir / "d").string()), DatasetError);
  }
  SUBCASE("empty intents file") {
    WriteDataset(dir / "d", "[]", "");
    CHECK_THROWS_AS(LoadDataset((dir / "d").string()), DatasetError);
  }
}

TEST_CASE("intent name rules") {
  CHECK_FALSE(CheckIntentName("alarm_set").has_value());
  CHECK(CheckIntentName("").has_value());
  CHECK(CheckIntentName(" alarm").has_value());
  CHECK(CheckIntentName("a\nb").has_value());
  CHECK(CheckIntentName("none_of_the_above").has_value());
  CHECK(CheckIntentName("__oos__").has_value());
}

TEST_CASE("dataset constructor enforces invariants") {
  CHECK_THROWS_AS(Dataset("x", {}, {}, {}), InvalidArgument);
  CHECK_THROWS_AS(Dataset("x", {{"a", ""}}, {{"t", std::string("b")}}, {}),
                  InvalidArgument);
  CHECK_THROWS_AS(Dataset("x", {{"a", ""}}, {{"t", std::nullopt}}, {}),
                  InvalidArgument);
  CHECK_THROWS_AS(Dataset("x", {{"a", ""}}, {{"", std::string("a")}}, {}),
                  InvalidArgument);
}

TEST_CASE("few-shot sampling properties") {
  const Dataset ds = MakeKeywordDataset(10, 30, 20, 0);

  SUBCASE("size is min(k, available) per intent, in dataset order") {
    for (int k : {1, 3, 5, 20, 25}) {
      const FewShotSample s = SampleFewShot(ds, k, 11);
      REQUIRE(s.per_intent.size() == ds.intents().size());
      for (std::size_t i = 0; i < s.per_intent.size(); ++i) {
        CHECK(s.per_intent[i].intent == ds.intents()[i].name);
        CHECK(s.per_intent[i].utterances.size() ==
              std::min<std::size_t>(k, 20));
      }
    }
  }
  SUBCASE("no duplicates, labels match, drawn from train") {
    const FewShotSample s = SampleFewShot(ds, 5, 3);
    std::set<std::string> seen;
    for (const auto& entry : s.per_intent) {
      for (const auto& u : entry.utterances) {
        CHECK(u.intent == entry.intent);
        CHECK(seen.insert(u.text).second);
        CHECK(std::find(ds.train().begin(), ds.train().end(), u) !=
              ds.train().end());
      }
    }
  }
  SUBCASE("deterministic for a seed, different across seeds") {
    CHECK(SampleFewShot(ds, 5, 42) == SampleFewShot(ds, 5, 42));
    CHECK_FALSE(SampleFewShot(ds, 5, 42) == SampleFewShot(ds, 5, 43));
  }
  SUBCASE("k-sample is a prefix of the (k+1)-sample") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const FewShotSample small = SampleFewShot(ds, 3, seed);
      const FewShotSample big = SampleFewShot(ds, 4, seed);
      for (std::size_t i = 0; i < small.per_intent.size(); ++i) {
        const auto& a = small.per_intent[i].utterances;
        const auto& b = big.per_intent[i].utterances;
        CHECK(std::equal(a.begin(), a.end(), b.begin()));
      }
    }
  }
  SUBCASE("an intent's draw does not depend on other intents") {
    const Dataset fewer = MakeKeywordDataset(10, 30, 20, 0);
    std::vector<IntentSpec> specs = fewer.intents();
    std::vector<LabeledUtterance> train;
    for (const auto& row : fewer.train()) {
      if (*row.intent != "alarm_set") train.push_back(row);
    }
    const Dataset without("k", specs, train, {});
    const auto a = SampleFewShot(ds, 5, 9);
    const auto b = SampleFewShot(without, 5, 9);
    CHECK(*a.Find("weather_query") == *b.Find("weather_query"));
    CHECK(b.Find("alarm_set")->empty());
  }
  SUBCASE("k < 1 is rejected") {
    CHECK_THROWS_AS(SampleFewShot(ds, 0, 1), InvalidArgument);
  }
  SUBCASE("flatten preserves order and total size") {
    const FewShotSample s = SampleFewShot(ds, 5, 1);
    const auto flat = s.Flatten();
    CHECK(flat.size() == s.TotalSize());
    CHECK(flat.size() == 50);
    CHECK(flat.front() == s.per_intent.front().utterances.front());
  }
}

TEST_CASE("utterance jsonl reader validates labels") {
  const Dataset ds = LoadDataset(TestData("mini"));
  const auto dir = ScratchDir("jsonl");
  const std::string path = (dir / "rows.jsonl").string();
  WriteFile(path,
            "{\"text\": \"x\", \"label\": \"alarm_set\"}\n"
            "{\"text\": \"y\", \"label\": \"__oos__\"}\n");
  CHECK(LoadUtterancesJsonl(path, ds, true).size() == 2);
  CHECK_THROWS_AS(LoadUtterancesJsonl(path, ds, false), DatasetError);
}
