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
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "intentkit/cli.h"
#include "intentkit/corpus.h"
#include "intentkit/eval.h"
#include "intentkit/fewshot_head.h"
#include "intentkit/text_util.h"
#include "test_support.h"

using namespace intentkit;
using intentkit::testing::MakeKeywordDataset;
using intentkit::testing::ScratchDir;
using intentkit::testing::TestData;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t CountLines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

// Dataset on disk plus a small, fast config pointing at it.
struct Workspace {
  fs::path root = ScratchDir("cli");
  std::string dataset = (root / "keywords").string();

  Workspace() { SaveDataset(MakeKeywordDataset(6, 16, 10, 4), dataset); }

  std::string Config(const std::string& method, const std::string& out,
                     const std::string& dataset_dir = "") const {
    const std::string path = (root / (method + "_" + fs::path(out).filename().string() + ".json")).string();
    json c = {{"dataset", dataset_dir.empty() ? dataset : dataset_dir},
              {"method", method},
              {"seeds", {1, 2, 3}},
              {"output_dir", out},
              {"train", {{"hidden_dim", 32}, {"epochs", 100}}}};
    WriteFile(path, c.dump(2));
    return path;
  }
};

}  // namespace

TEST_CASE("stats prints the header and one row") {
  const auto r = Cli({"stats", TestData("mini")});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "intents | train | test\n3 | 8 | 4\n");

  const auto j = Cli({"stats", TestData("mini"), "--json"});
  REQUIRE(j.code == kExitOk);
  const auto doc = json::parse(j.out);
  CHECK(doc["intents"] == 3);
  CHECK(doc["oos"] == 1);
  CHECK(doc["per_intent"]["alarm_remove"]["train"] == 2);
}

TEST_CASE("missing dataset path exits 2 and names the path") {
  const auto r = Cli({"stats", "/no/such/dataset_dir"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("/no/such/dataset_dir") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("usage errors exit 2, help exits 0") {
  CHECK(Cli({}).code == kExitUsage);
  CHECK(Cli({"frobnicate"}).code == kExitUsage);
  CHECK(Cli({"sample", TestData("mini"), "-k", "many"}).code == kExitUsage);
  CHECK(Cli({"run"}).code == kExitUsage);  // --config required
  const auto help = Cli({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("zeroshot") != std::string::npos);
  CHECK(Cli({"augment", TestData("mini"), "--approach", "parrot"}).code ==
        kExitUsage);
}

TEST_CASE("sample is deterministic and sized k per intent") {
  const auto a = Cli({"sample", TestData("mini"), "-k", "2", "--seed", "4"});
  const auto b = Cli({"sample", TestData("mini"), "-k", "2", "--seed", "4"});
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(CountLines(a.out) == 6);
  const auto one = Cli({"sample", TestData("mini"), "-k", "1", "--seed", "4"});
  // Nested samples: every 1-shot row is also in the 2-shot sample.
  for (const auto& line : SplitLines(one.out)) {
    if (!line.empty()) CHECK(a.out.find(line) != std::string::npos);
  }
}

TEST_CASE("train then predict") {
  Workspace ws;
  const std::string head = (ws.root / "model" / "head.json").string();
  const auto t = Cli({"train", ws.dataset, "-k", "5", "--hidden", "32",
                      "--epochs", "150", "--out", head});
  REQUIRE(t.code == kExitOk);
  CHECK(fs::exists(head));
  CHECK(LoadHead(head).num_classes() == 6);

  const auto p = Cli({"predict", ws.dataset, "--head", head});
  REQUIRE(p.code == kExitOk);
  const auto preds = ParsePredictionsJsonl(p.out);
  CHECK(preds.size() == 6 * 6 + 4);
  CHECK(InScopeAccuracy(preds) >= 0.9);
  CHECK(p.err.find("in-scope accuracy") != std::string::npos);

  CHECK(Cli({"train", ws.dataset}).code == kExitUsage);  // no --out
  CHECK(Cli({"predict", ws.dataset, "--head", "/no/head.json"}).code ==
        kExitUsage);
}

TEST_CASE("zeroshot and score with mocks") {
  Workspace ws;
  const auto z = Cli({"zeroshot", ws.dataset, "--mock"});
  REQUIRE(z.code == kExitOk);
  CHECK(CountLines(z.out) == 40);
  CHECK(z.err.find("in-scope accuracy: 1") != std::string::npos);
  CHECK(z.err.find("oos recall: 1") != std::string::npos);

  const auto f = Cli({"zeroshot", ws.dataset, "--mock", "--filter",
                      "--top-k", "2"});
  REQUIRE(f.code == kExitOk);
  const auto first = json::parse(SplitLines(f.out).front());
  CHECK(first["prompt_intents"].size() == 2);

  const auto s = Cli({"score", ws.dataset, "--mock", "--parallelism", "3"});
  REQUIRE(s.code == kExitOk);
  CHECK(CountLines(s.out) == 40);
  CHECK(s.err.find("in-scope accuracy: 1") != std::string::npos);

  CHECK(Cli({"score", ws.dataset, "--provider", "echo"}).code == kExitUsage);
}

TEST_CASE("augment prints rows and writes an export") {
  Workspace ws;
  const auto a = Cli({"augment", ws.dataset, "--approach", "description"});
  REQUIRE(a.code == kExitOk);
  CHECK(CountLines(a.out) == 6 * 4);
  CHECK(a.err.find("\"approach\": \"description\"") != std::string::npos);

  const std::string dir = (ws.root / "aug").string();
  const auto e = Cli({"augment", ws.dataset, "--include-seed", "--out", dir});
  REQUIRE(e.code == kExitOk);
  CHECK(fs::exists(fs::path(dir) / "manifest.json"));
  const auto rows = ReadFile(dir + "/train.jsonl");
  CHECK(CountLines(rows) == 6 * (10 + 5));
}

TEST_CASE("run writes reports and reruns identically") {
  Workspace ws;
  const std::string out_a = (ws.root / "run_a").string();
  const std::string out_b = (ws.root / "run_b").string();
  const auto a = Cli({"run", "--config", ws.Config("fewshot", out_a)});
  REQUIRE(a.code == kExitOk);
  CHECK(a.out.starts_with("method "));
  CHECK(a.out.find("fewshot") != std::string::npos);
  const auto b = Cli({"run", "--config", ws.Config("fewshot", out_b),
                      "--concurrent-seeds"});
  REQUIRE(b.code == kExitOk);
  CHECK(ReadFile(out_a + "/report.json") == ReadFile(out_b + "/report.json"));
  CHECK(a.out == b.out);
  for (int s = 1; s <= 3; ++s) {
    CHECK(fs::exists(out_a + "/seed_" + std::to_string(s) +
                     "/predictions.jsonl"));
  }

  // Command-line seeds override the file.
  const std::string out_c = (ws.root / "run_c").string();
  const auto c = Cli({"run", "--config", ws.Config("zeroshot", out_c),
                      "--seeds", "4,5"});
  REQUIRE(c.code == kExitOk);
  const auto report = ParseReportJson(ReadFile(out_c + "/report.json"));
  CHECK(report.seeds == std::vector<std::uint64_t>{4, 5});
  CHECK(report.in_scope_accuracy.mean == 1.0);
}

TEST_CASE("run with a bad config exits 2 before doing work") {
  Workspace ws;
  const std::string path = (ws.root / "bad.json").string();
  WriteFile(path, R"({"dataset": "x", "method": "fewshot", "k": 0})");
  const auto r = Cli({"run", "--config", path});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("config.k") != std::string::npos);
  CHECK(Cli({"run", "--config", (ws.root / "absent.json").string()}).code ==
        kExitUsage);
}

TEST_CASE("compare builds one row per report") {
  Workspace ws;
  const std::string few = (ws.root / "few").string();
  const std::string zs = (ws.root / "zs").string();
  REQUIRE(Cli({"run", "--config", ws.Config("fewshot", few)}).code == 0);
  REQUIRE(Cli({"run", "--config", ws.Config("zeroshot", zs)}).code == 0);
  const auto r =
      Cli({"compare", few + "/report.json", zs + "/report.json"});
  REQUIRE(r.code == kExitOk);
  CHECK(CountLines(r.out) == 4);  // header, rule, two rows
  CHECK(r.out.find("fewshot ") != std::string::npos);
  CHECK(r.out.find("zeroshot") != std::string::npos);

  // A report for a different dataset is refused.
  const std::string other_dir = (ws.root / "other").string();
  SaveDataset(MakeKeywordDataset(4, 10, 6, 2), other_dir);
  const std::string other = (ws.root / "other_run").string();
  REQUIRE(Cli({"run", "--config", ws.Config("zeroshot", other, other_dir)})
              .code == 0);
  const auto mismatch =
      Cli({"compare", few + "/report.json", other + "/report.json"});
  CHECK(mismatch.code == kExitUsage);
  CHECK(mismatch.err.find("different datasets") != std::string::npos);

  CHECK(Cli({"compare", few + "/report.json"}).code == kExitUsage);
  const std::string junk = (ws.root / "junk.json").string();
  WriteFile(junk, "{\"method\": 3}");
  const auto bad = Cli({"compare", few + "/report.json", junk});
  CHECK(bad.code == kExitUsage);
  CHECK(bad.err.find("junk.json") != std::string::npos);
}

TEST_CASE("partial seed failure exits 1") {
  Workspace ws;
  // Scripted provider with no answers: augmentation yields nothing and the
  // seed fails; failures are recorded, not thrown.
  const std::string out = (ws.root / "fail").string();
  const std::string path = (ws.root / "fail.json").string();
  WriteFile(path, json{{"dataset", ws.dataset},
                       {"method", "augment_paraphrase"},
                       {"seeds", {1, 2}},
                       {"output_dir", out},
                       {"completion", {{"provider", "scripted"}}}}
                      .dump());
  const auto r = Cli({"run", "--config", path});
  CHECK(r.code == kExitFailure);
  CHECK(r.err.find("seed 1 failed") != std::string::npos);
  CHECK(fs::exists(out + "/failures.json"));
}
