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

#include "intentkit/experiment.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"
#include "intentkit/error.h"
#include "intentkit/kernels.h"
#include "intentkit/text_util.h"
#include "intentkit/tfew_scoring.h"

namespace intentkit {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

bool IsKnownMethod(const std::string& method) {
  return std::find(std::begin(kMethods), std::end(kMethods), method) !=
         std::end(kMethods);
}

namespace {

// ${NAME} -> value of NAME. Applied to every string in the document.
std::string Interpolate(const std::string& s, const std::string& where) {
  static const std::regex kVar(R"(\$\{([A-Za-z_][A-Za-z0-9_]*)\})");
  std::string out;
  auto begin = std::sregex_iterator(s.begin(), s.end(), kVar);
  std::size_t last = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    out.append(s, last, m.position() - last);
    const std::string name = m[1].str();
    const char* value = std::getenv(name.c_str());
    if (value == nullptr) {
      throw ConfigError(where + ": environment variable " + name +
                        " is not set");
    }
    out += value;
    last = m.position() + m.length();
  }
  out.append(s, last);
  return out;
}

void InterpolateAll(json& j, const std::string& where) {
  if (j.is_string()) {
    j = Interpolate(j.get<std::string>(), where);
  } else if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      InterpolateAll(it.value(), where + "." + it.key());
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      InterpolateAll(j[i], where + "[" + std::to_string(i) + "]");
    }
  }
}

// Typed access with config-path error messages.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  void AllowOnly(std::initializer_list<const char*> keys) const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (std::none_of(keys.begin(), keys.end(),
                       [&](const char* k) { return it.key() == k; })) {
        throw ConfigError(Path(it.key()) + ": unknown key");
      }
    }
  }

  bool Has(const char* key) const { return j_.contains(key); }

  template <typename T>
  void Get(const char* key, T& out) const {
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(Path(key) + ": wrong type");
    }
  }

  Section Sub(const char* key) const { return Section(j_.at(key), Path(key)); }
  const json& Raw(const char* key) const { return j_.at(key); }
  std::string Path(const std::string& key) const { return path_ + "." + key; }

 private:
  const json& j_;
  std::string path_;
};

void ReadHttp(const Section& s, HttpEndpointConfig& http) {
  s.Get("id", http.id);
  s.Get("url", http.base_url);
  s.Get("token_env", http.token_env);
  s.Get("timeout_ms", http.timeout_ms);
  s.Get("max_retries", http.max_retries);
  s.Get("backoff_ms", http.backoff_ms);
  s.Get("complete_path", http.complete_path);
  s.Get("score_path", http.score_path);
  s.Get("embed_path", http.embed_path);
  s.Get("scoring", http.scoring);
}

void ReadGeneration(const Section& s, GenerationParams& g) {
  s.Get("temperature", g.temperature);
  s.Get("top_p", g.top_p);
  if (s.Has("max_tokens")) {
    if (s.Raw("max_tokens").is_null()) {
      g.max_tokens.reset();
    } else {
      int v = 0;
      s.Get("max_tokens", v);
      g.max_tokens = v;
    }
  }
  s.Get("stop", g.stop_sequences);
}

ordered_json HttpJson(const HttpEndpointConfig& http) {
  return {{"id", http.id},
          {"url", http.base_url},
          {"token_env", http.token_env},
          {"timeout_ms", http.timeout_ms},
          {"max_retries", http.max_retries},
          {"backoff_ms", http.backoff_ms},
          {"complete_path", http.complete_path},
          {"score_path", http.score_path},
          {"embed_path", http.embed_path},
          {"scoring", http.scoring}};
}

ordered_json GenerationJson(const GenerationParams& g) {
  ordered_json j;
  j["temperature"] = g.temperature;
  j["top_p"] = g.top_p;
  j["max_tokens"] = g.max_tokens ? ordered_json(*g.max_tokens) : nullptr;
  j["stop"] = g.stop_sequences;
  return j;
}

template <typename Fn>
void Rethrow(const std::string& where, Fn&& fn) {
  try {
    fn();
  } catch (const InvalidArgument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (dataset.empty()) throw ConfigError("config.dataset: required");
  if (!IsKnownMethod(method)) {
    throw ConfigError("config.method: unknown method '" + method + "'");
  }
  if (k < 1) throw ConfigError("config.k: must be >= 1");
  if (seeds.empty()) throw ConfigError("config.seeds: at least one seed");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() !=
      seeds.size()) {
    throw ConfigError("config.seeds: duplicate seed");
  }
  if (output_dir.empty()) throw ConfigError("config.output_dir: required");
  if (parallelism < 1) throw ConfigError("config.parallelism: must be >= 1");
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ConfigError("config.threshold: must be in [0, 1]");
  }

  if (embedding.provider == "hash") {
    if (embedding.dimension < 8) {
      throw ConfigError("config.embedding.dimension: must be >= 8");
    }
  } else if (embedding.provider == "remote") {
    if (embedding.http.base_url.empty()) {
      throw ConfigError("config.embedding.url: required for remote provider");
    }
    if (embedding.dimension < 1) {
      throw ConfigError("config.embedding.dimension: must be >= 1");
    }
  } else {
    throw ConfigError("config.embedding.provider: unknown provider '" +
                      embedding.provider + "'");
  }

  const std::string& cp = completion.provider;
  if (cp == "remote") {
    if (completion.http.base_url.empty()) {
      throw ConfigError("config.completion.url: required for remote provider");
    }
  } else if (cp == "scripted") {
    for (const auto& [re, text] : completion.patterns) {
      try {
        std::regex probe(re);
      } catch (const std::regex_error&) {
        throw ConfigError("config.completion.patterns: bad regex '" + re +
                          "'");
      }
    }
  } else if (cp != "oracle" && cp != "echo") {
    throw ConfigError("config.completion.provider: unknown provider '" + cp +
                      "'");
  }
  if (method == "rank_classify") {
    const bool scores = cp == "oracle" || cp == "scripted" ||
                        (cp == "remote" && completion.http.scoring);
    if (!scores) {
      throw ConfigError("config.completion: rank_classify needs a provider "
                        "with scoring, '" + cp + "' has none");
    }
  }

  Rethrow("config.train", [&] { train.Validate(); });
  Rethrow("config.zeroshot", [&] {
    zeroshot.Validate();
    CompletionRequest{"probe", zeroshot.generation}.Validate();
  });
  Rethrow("config.augment", [&] {
    augment.Validate();
    CompletionRequest{"probe", augment.generation}.Validate();
  });
}

ExperimentConfig ParseExperimentConfig(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  InterpolateAll(root, "config");

  ExperimentConfig c;
  bool completion_set = false;
  const Section s(root, "config");
  s.AllowOnly({"dataset", "method", "k", "seeds", "output_dir", "embedding",
               "completion", "train", "threshold", "zeroshot", "augment",
               "parallelism", "concurrent_seeds"});
  s.Get("dataset", c.dataset);
  s.Get("method", c.method);
  s.Get("k", c.k);
  s.Get("seeds", c.seeds);
  s.Get("output_dir", c.output_dir);
  s.Get("threshold", c.threshold);
  s.Get("parallelism", c.parallelism);
  s.Get("concurrent_seeds", c.concurrent_seeds);

  if (s.Has("embedding")) {
    const Section e = s.Sub("embedding");
    e.AllowOnly({"provider", "dimension", "id", "url", "token_env",
                 "timeout_ms", "max_retries", "backoff_ms", "embed_path"});
    e.Get("provider", c.embedding.provider);
    e.Get("dimension", c.embedding.dimension);
    ReadHttp(e, c.embedding.http);
  }
  if (s.Has("completion")) {
    const Section e = s.Sub("completion");
    e.AllowOnly({"provider", "constrain_to_prompt", "exact", "patterns",
                 "fallback", "prefer", "id", "url", "token_env", "timeout_ms",
                 "max_retries", "backoff_ms", "complete_path", "score_path",
                 "scoring"});
    e.Get("provider", c.completion.provider);
    completion_set = e.Has("provider");
    e.Get("constrain_to_prompt", c.completion.constrain_to_prompt);
    if (e.Has("exact")) {
      std::map<std::string, std::string> exact;
      e.Get("exact", exact);
      c.completion.exact.assign(exact.begin(), exact.end());
    }
    // Patterns keep their order: [["regex", "completion"], ...].
    e.Get("patterns", c.completion.patterns);
    e.Get("fallback", c.completion.fallback);
    e.Get("prefer", c.completion.prefer);
    ReadHttp(e, c.completion.http);
  }
  if (s.Has("train")) {
    const Section t = s.Sub("train");
    t.AllowOnly({"hidden_dim", "learning_rate", "epochs", "l2_penalty",
                 "activation", "backend"});
    t.Get("hidden_dim", c.train.hidden_dim);
    t.Get("learning_rate", c.train.learning_rate);
    t.Get("epochs", c.train.epochs);
    t.Get("l2_penalty", c.train.l2_penalty);
    if (t.Has("activation")) {
      std::string name;
      t.Get("activation", name);
      Rethrow(t.Path("activation"),
              [&] { c.train.activation = ParseActivation(name); });
    }
    if (t.Has("backend")) {
      std::string name;
      t.Get("backend", name);
      if (name == "serial") {
        c.train.backend = kernels::Backend::kSerial;
      } else if (name == "parallel") {
        c.train.backend = kernels::Backend::kParallel;
      } else {
        throw ConfigError(t.Path("backend") + ": expected serial or parallel");
      }
    }
  }
  if (s.Has("zeroshot")) {
    const Section z = s.Sub("zeroshot");
    z.AllowOnly({"top_k", "include_none_option", "temperature", "top_p",
                 "max_tokens", "stop"});
    z.Get("top_k", c.zeroshot.top_k);
    z.Get("include_none_option", c.zeroshot.include_none_option);
    ReadGeneration(z, c.zeroshot.generation);
  }
  if (s.Has("augment")) {
    const Section a = s.Sub("augment");
    a.AllowOnly({"n_generate", "include_seed", "seed_size", "temperature",
                 "top_p", "max_tokens", "stop"});
    a.Get("n_generate", c.augment.n_generate);
    a.Get("include_seed", c.augment.include_seed);
    a.Get("seed_size", c.augment.seed_size);
    ReadGeneration(a, c.augment.generation);
  }
  // Augmentation needs a generator; the zero-shot oracle would return "".
  if (!completion_set && c.method.starts_with("augment_")) {
    c.completion.provider = "echo";
  }
  c.zeroshot.use_filtering = c.method == "zeroshot_filtered";
  c.augment.parallelism = c.parallelism;
  c.Validate();
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::string text;
  try {
    text = ReadFile(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return ParseExperimentConfig(text);
}

std::string ExperimentConfigJson(const ExperimentConfig& c) {
  ordered_json j;
  j["dataset"] = c.dataset;
  j["method"] = c.method;
  j["k"] = c.k;
  j["seeds"] = c.seeds;
  j["output_dir"] = c.output_dir;

  ordered_json emb;
  emb["provider"] = c.embedding.provider;
  emb["dimension"] = c.embedding.dimension;
  if (c.embedding.provider == "remote") {
    const ordered_json http = HttpJson(c.embedding.http);
    for (auto& [k, v] : http.items()) emb[k] = v;
    emb.erase("complete_path");
    emb.erase("score_path");
    emb.erase("scoring");
  }
  j["embedding"] = emb;

  ordered_json comp;
  comp["provider"] = c.completion.provider;
  if (c.completion.provider == "oracle") {
    comp["constrain_to_prompt"] = c.completion.constrain_to_prompt;
  } else if (c.completion.provider == "scripted") {
    ordered_json exact = ordered_json::object();
    for (const auto& [p, t] : c.completion.exact) exact[p] = t;
    comp["exact"] = exact;
    comp["patterns"] = c.completion.patterns;
    comp["fallback"] = c.completion.fallback;
    comp["prefer"] = c.completion.prefer;
  } else if (c.completion.provider == "remote") {
    const ordered_json http = HttpJson(c.completion.http);
    for (auto& [k, v] : http.items()) comp[k] = v;
    comp.erase("embed_path");
  }
  j["completion"] = comp;

  j["train"] = {{"hidden_dim", c.train.hidden_dim},
                {"learning_rate", c.train.learning_rate},
                {"epochs", c.train.epochs},
                {"l2_penalty", c.train.l2_penalty},
                {"activation", ActivationName(c.train.activation)},
                {"backend", c.train.backend == kernels::Backend::kSerial
                                ? "serial"
                                : "parallel"}};
  j["threshold"] = c.threshold;

  ordered_json zs = {{"top_k", c.zeroshot.top_k},
                     {"include_none_option", c.zeroshot.include_none_option}};
  const ordered_json zs_gen = GenerationJson(c.zeroshot.generation);
  for (auto& [k, v] : zs_gen.items()) zs[k] = v;
  j["zeroshot"] = zs;

  ordered_json aug = {{"n_generate", c.augment.n_generate},
                      {"include_seed", c.augment.include_seed},
                      {"seed_size", c.augment.seed_size}};
  const ordered_json aug_gen = GenerationJson(c.augment.generation);
  for (auto& [k, v] : aug_gen.items()) aug[k] = v;
  j["augment"] = aug;

  j["parallelism"] = c.parallelism;
  j["concurrent_seeds"] = c.concurrent_seeds;
  return j.dump(2) + "\n";
}

std::unique_ptr<EmbeddingProvider> MakeEmbeddingProvider(
    const EmbeddingSettings& settings) {
  if (settings.provider == "hash") {
    return std::make_unique<HashEmbeddingProvider>(settings.dimension);
  }
  if (settings.provider == "remote") {
    return std::make_unique<HttpEmbeddingProvider>(settings.http,
                                                   settings.dimension);
  }
  throw ConfigError("unknown embedding provider '" + settings.provider + "'");
}

std::unique_ptr<CompletionProvider> MakeCompletionProvider(
    const CompletionSettings& settings, const Dataset& dataset) {
  if (settings.provider == "oracle") {
    return std::make_unique<OracleCompletionProvider>(
        dataset, settings.constrain_to_prompt);
  }
  if (settings.provider == "echo") {
    return std::make_unique<EchoAugmentationProvider>();
  }
  if (settings.provider == "scripted") {
    auto p = std::make_unique<ScriptedCompletionProvider>();
    for (const auto& [prompt, text] : settings.exact) p->AddExact(prompt, text);
    for (const auto& [re, text] : settings.patterns) p->AddPattern(re, text);
    p->SetFallback(settings.fallback);
    for (const auto& t : settings.prefer) p->Prefer(t);
    return p;
  }
  if (settings.provider == "remote") {
    return std::make_unique<HttpCompletionProvider>(settings.http);
  }
  throw ConfigError("unknown completion provider '" + settings.provider + "'");
}

namespace {

namespace fs = std::filesystem;

std::vector<Prediction> ToPredictions(
    const std::vector<LabeledUtterance>& rows,
    const std::vector<std::optional<std::string>>& predicted) {
  std::vector<Prediction> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.push_back({rows[i].text, rows[i].intent, predicted[i]});
  }
  return out;
}

std::string MetricsJson(const RunResult& run) {
  const MetricsReport m = ComputeMetrics(run);
  ordered_json j;
  j["seed"] = run.seed;
  j["method"] = run.method;
  j["n_in_scope"] = m.n_in_scope;
  j["n_oos"] = m.n_oos;
  j["in_scope_accuracy"] = m.in_scope_accuracy;
  j["oos_recall"] = m.oos_recall ? ordered_json(*m.oos_recall) : nullptr;
  j["top_k_recall"] = m.top_k_recall ? ordered_json(*m.top_k_recall) : nullptr;
  return j.dump(2) + "\n";
}

int ReportedK(const ExperimentConfig& c) {
  if (c.method == "fewshot" || c.method == "zeroshot_filtered") return c.k;
  if (c.method.starts_with("augment_")) return c.augment.seed_size;
  return 0;
}

// Shared, read-only state for one experiment.
struct Context {
  const ExperimentConfig& config;
  const Dataset& dataset;
  const EmbeddingProvider& embedder;
  const CompletionProvider& completer;
  std::vector<std::string> test_texts;
  std::vector<EmbeddingVector> test_vectors;  // methods with a trained head
};

std::vector<std::optional<std::string>> PredictWithHead(
    const Context& ctx, const ClassifierHead& head) {
  const auto outcomes = PredictBatch(head, ctx.test_vectors,
                                     ctx.config.threshold,
                                     ctx.config.train.backend);
  std::vector<std::optional<std::string>> out;
  out.reserve(outcomes.size());
  for (const auto& o : outcomes) out.push_back(o.label);
  return out;
}

RunResult RunSeed(const Context& ctx, std::uint64_t seed, const fs::path& dir,
                  std::ostream& log) {
  const ExperimentConfig& c = ctx.config;
  const auto& test = ctx.dataset.test();
  fs::create_directories(dir);

  RunResult run;
  run.seed = seed;
  run.method = c.method;
  std::vector<std::optional<std::string>> predicted;
  TrainConfig train = c.train;
  train.seed = seed;

  if (c.method == "fewshot") {
    const FewShotSample sample = SampleFewShot(ctx.dataset, c.k, seed);
    WriteUtterancesJsonl(sample.Flatten(), (dir / "sample.jsonl").string());
    const ClassifierHead head = TrainHead(sample, ctx.embedder, train);
    SaveHead(head, (dir / "head.json").string());
    predicted = PredictWithHead(ctx, head);
  } else if (c.method == "zeroshot" || c.method == "zeroshot_filtered") {
    std::optional<FewShotSample> sample;
    if (c.zeroshot.use_filtering) {
      sample = SampleFewShot(ctx.dataset, c.k, seed);
      WriteUtterancesJsonl(sample->Flatten(), (dir / "sample.jsonl").string());
    }
    const auto outcomes = ClassifyZeroShotBatch(
        ctx.test_texts, ctx.dataset, c.zeroshot, ctx.completer,
        sample ? &ctx.embedder : nullptr, sample ? &*sample : nullptr,
        c.parallelism);
    std::string report;
    std::string prompts;
    for (std::size_t i = 0; i < test.size(); ++i) {
      const auto& o = outcomes[i];
      predicted.push_back(o.prediction.label);
      report += ZeroShotReportLine(test[i], o);
      prompts += ordered_json{{"text", test[i].text}, {"prompt", o.prompt}}
                     .dump() + "\n";
      if (c.zeroshot.use_filtering && !test[i].is_oos()) {
        run.rankings.push_back({*test[i].intent, o.prompt_intents});
      }
    }
    run.ranking_k = static_cast<std::size_t>(c.zeroshot.top_k);
    WriteFile((dir / "zeroshot.jsonl").string(), report);
    WriteFile((dir / "prompts.jsonl").string(), prompts);
  } else if (c.method.starts_with("augment_")) {
    const AugmentApproach approach = ParseApproach(c.method.substr(8));
    const FewShotSample sample =
        SampleFewShot(ctx.dataset, c.augment.seed_size, seed);
    WriteUtterancesJsonl(sample.Flatten(), (dir / "sample.jsonl").string());
    const AugmentResult aug =
        AugmentDataset(sample, ctx.dataset, ctx.completer, c.augment, approach);
    ExportAugmented(aug, (dir / "augmented").string());
    for (const auto& e : aug.errors) {
      log << "  seed " << seed << ": augmentation error for " << e.intent
          << ": " << e.message << "\n";
    }
    if (aug.utterances.empty()) {
      throw Error("augmentation produced no training data");
    }
    const ClassifierHead head = TrainHead(
        aug.utterances, ctx.dataset.IntentNames(), ctx.embedder, train);
    SaveHead(head, (dir / "head.json").string());
    predicted = PredictWithHead(ctx, head);
  } else if (c.method == "rank_classify") {
    std::vector<std::string> lines(test.size());
    predicted.resize(test.size());
    BoundedParallelFor(test.size(), c.parallelism, [&](std::size_t i) {
      const std::string prompt = BuildZeroShotPrompt(
          ctx.dataset.intents(), test[i].text, /*include_none_option=*/false);
      const RankResult r =
          RankClassify(prompt, ctx.dataset.intents(), ctx.completer);
      predicted[i] = r.predicted;
      lines[i] = ScoringReportLine(test[i], r);
    });
    std::string report;
    for (const auto& l : lines) report += l;
    WriteFile((dir / "scoring.jsonl").string(), report);
  }

  run.predictions = ToPredictions(test, predicted);
  WriteFile((dir / "predictions.jsonl").string(),
            PredictionsJsonl(run.predictions));
  WriteFile((dir / "metrics.json").string(), MetricsJson(run));
  const MetricsReport m = ComputeMetrics(run);
  log << "  seed " << seed << ": in-scope accuracy " << m.in_scope_accuracy
      << "\n";
  return run;
}

}  // namespace

ExperimentOutcome RunExperiment(const ExperimentConfig& config,
                                const Dataset& dataset,
                                const EmbeddingProvider& embedder,
                                const CompletionProvider& completer,
                                std::ostream& log) {
  config.Validate();
  if (std::none_of(dataset.test().begin(), dataset.test().end(),
                   [](const auto& r) { return !r.is_oos(); })) {
    throw ConfigError("dataset " + dataset.name() +
                      " has no in-scope test utterances");
  }
  const fs::path out(config.output_dir);
  fs::create_directories(out);
  WriteFile((out / "config.json").string(), ExperimentConfigJson(config));
  fs::remove(out / "failures.json");

  Context ctx{config, dataset, embedder, completer, {}, {}};
  for (const auto& r : dataset.test()) ctx.test_texts.push_back(r.text);

  const std::size_t n = config.seeds.size();
  std::vector<std::optional<RunResult>> results(n);
  std::vector<std::string> errors(n);
  std::vector<std::string> logs(n);

  log << config.method << " on " << dataset.name() << ", " << n << " seed"
      << (n == 1 ? "" : "s") << "\n";

  const bool needs_head =
      config.method == "fewshot" || config.method.starts_with("augment_");
  std::string shared_error;
  if (needs_head) {
    try {
      ctx.test_vectors = embedder.EmbedBatch(ctx.test_texts);
    } catch (const Error& e) {
      shared_error = std::string("embedding test split: ") + e.what();
    }
  }

  auto one = [&](std::size_t i) {
    const std::uint64_t seed = config.seeds[i];
    std::ostringstream seed_log;
    try {
      if (!shared_error.empty()) throw Error(shared_error);
      results[i] = RunSeed(ctx, seed, out / ("seed_" + std::to_string(seed)),
                           seed_log);
    } catch (const std::exception& e) {
      errors[i] = e.what();
      seed_log << "  seed " << seed << ": FAILED: " << e.what() << "\n";
    }
    logs[i] = seed_log.str();
  };
  if (config.concurrent_seeds) {
    BoundedParallelFor(n, n, one);
    for (const auto& l : logs) log << l;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      one(i);
      log << logs[i];
    }
  }

  ExperimentOutcome outcome;
  for (std::size_t i = 0; i < n; ++i) {
    if (results[i]) {
      outcome.runs.push_back(std::move(*results[i]));
    } else {
      outcome.failures.push_back({config.seeds[i], errors[i]});
    }
  }
  if (!outcome.failures.empty()) {
    ordered_json f = ordered_json::array();
    for (const auto& x : outcome.failures) {
      f.push_back({{"seed", x.seed}, {"error", x.message}});
    }
    WriteFile((out / "failures.json").string(), f.dump(2) + "\n");
  }
  if (!outcome.runs.empty()) {
    outcome.report = Aggregate(outcome.runs, dataset.name(), ReportedK(config));
    WriteFile((out / "report.json").string(), ReportJson(*outcome.report));
    const std::vector<AggregateReport> one_report = {*outcome.report};
    WriteFile((out / "report.txt").string(), FormatReportTable(one_report));
  } else {
    fs::remove(out / "report.json");
    fs::remove(out / "report.txt");
  }
  return outcome;
}

ExperimentOutcome RunExperiment(const ExperimentConfig& config,
                                std::ostream& log) {
  config.Validate();
  const Dataset dataset = LoadDataset(config.dataset);
  const auto embedder = MakeEmbeddingProvider(config.embedding);
  const auto completer = MakeCompletionProvider(config.completion, dataset);
  return RunExperiment(config, dataset, *embedder, *completer, log);
}

}  // namespace intentkit
