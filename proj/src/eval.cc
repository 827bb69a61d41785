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

#include "intentkit/eval.h"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "intentkit/corpus.h"
#include "intentkit/error.h"
#include "intentkit/text_util.h"

namespace intentkit {

using ordered_json = nlohmann::ordered_json;

double InScopeAccuracy(std::span<const Prediction> predictions) {
  std::size_t total = 0;
  std::size_t correct = 0;
  for (const auto& p : predictions) {
    if (!p.gold) continue;
    ++total;
    if (p.predicted && *p.predicted == *p.gold) ++correct;
  }
  if (total == 0) throw InvalidArgument("no in-scope rows to score");
  return static_cast<double>(correct) / static_cast<double>(total);
}

std::optional<double> OosRecall(std::span<const Prediction> predictions) {
  std::size_t total = 0;
  std::size_t rejected = 0;
  for (const auto& p : predictions) {
    if (p.gold) continue;
    ++total;
    if (!p.predicted) ++rejected;
  }
  if (total == 0) return std::nullopt;
  return static_cast<double>(rejected) / static_cast<double>(total);
}

double TopKRecall(std::span<const RankedRow> rows, std::size_t k) {
  if (rows.empty()) throw InvalidArgument("top-k recall over no rows");
  if (k == 0) throw InvalidArgument("k must be >= 1");
  std::size_t hits = 0;
  for (const auto& row : rows) {
    const std::size_t n = std::min(k, row.ranked.size());
    if (std::find(row.ranked.begin(), row.ranked.begin() + n, row.gold) !=
        row.ranked.begin() + n) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(rows.size());
}

MetricsReport ComputeMetrics(const RunResult& run) {
  MetricsReport m;
  for (const auto& p : run.predictions) (p.gold ? m.n_in_scope : m.n_oos)++;
  m.in_scope_accuracy = InScopeAccuracy(run.predictions);
  m.oos_recall = OosRecall(run.predictions);
  if (!run.rankings.empty()) {
    m.top_k_recall = TopKRecall(run.rankings, run.ranking_k);
  }
  return m;
}

MeanStd MeanAndSampleStd(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("aggregate over no values");
  double sum = 0.0;
  for (double v : values) sum += v;
  MeanStd out;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  // Identical values give exactly zero spread, regardless of rounding in
  // the mean.
  if (std::all_of(values.begin(), values.end(),
                  [&](double v) { return v == values.front(); })) {
    out.mean = values.front();
    return out;
  }
  double sq = 0.0;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  out.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
  return out;
}

AggregateReport Aggregate(std::span<const RunResult> runs,
                          const std::string& dataset, int k) {
  if (runs.empty()) throw InvalidArgument("aggregate over no runs");
  AggregateReport report;
  report.method = runs.front().method;
  report.dataset = dataset;
  report.k = k;
  std::vector<double> acc, oos, topk;
  for (const auto& run : runs) {
    report.seeds.push_back(run.seed);
    const MetricsReport m = ComputeMetrics(run);
    acc.push_back(m.in_scope_accuracy);
    if (m.oos_recall) oos.push_back(*m.oos_recall);
    if (m.top_k_recall) topk.push_back(*m.top_k_recall);
  }
  report.in_scope_accuracy = MeanAndSampleStd(acc);
  if (oos.size() == runs.size()) report.oos_recall = MeanAndSampleStd(oos);
  if (topk.size() == runs.size()) report.top_k_recall = MeanAndSampleStd(topk);
  return report;
}

namespace {

ordered_json MeanStdJson(const std::optional<MeanStd>& v) {
  if (!v) return nullptr;
  return {{"mean", v->mean}, {"std", v->std}};
}

std::optional<MeanStd> MeanStdFromJson(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return MeanStd{j.at("mean").get<double>(), j.at("std").get<double>()};
}

std::string LabelOrOos(const std::optional<std::string>& label) {
  return label ? *label : std::string(kOosFileLabel);
}

std::optional<std::string> LabelFromFile(const std::string& label) {
  if (label == kOosFileLabel) return std::nullopt;
  return label;
}

}  // namespace

std::string ReportJson(const AggregateReport& report) {
  ordered_json j;
  j["method"] = report.method;
  j["dataset"] = report.dataset;
  j["k"] = report.k;
  j["seeds"] = report.seeds;
  ordered_json metrics;
  metrics["in_scope_accuracy"] = MeanStdJson(report.in_scope_accuracy);
  metrics["oos_recall"] = MeanStdJson(report.oos_recall);
  metrics["top_k_recall"] = MeanStdJson(report.top_k_recall);
  j["metrics"] = metrics;
  return j.dump(2) + "\n";
}

AggregateReport ParseReportJson(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    AggregateReport r;
    r.method = j.at("method").get<std::string>();
    r.dataset = j.at("dataset").get<std::string>();
    r.k = j.at("k").get<int>();
    r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    const auto& m = j.at("metrics");
    auto acc = MeanStdFromJson(m.at("in_scope_accuracy"));
    if (!acc) throw DatasetError("report", 0, "missing in_scope_accuracy");
    r.in_scope_accuracy = *acc;
    r.oos_recall = MeanStdFromJson(m.value("oos_recall", nlohmann::json()));
    r.top_k_recall = MeanStdFromJson(m.value("top_k_recall", nlohmann::json()));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError("report", 0, e.what());
  }
}

std::string FormatPercentCell(const MeanStd& value) {
  const int saved = std::fegetround();
  std::fesetround(FE_TONEAREST);
  const double mean = std::nearbyint(value.mean * 100.0);
  const double std_tenths = std::nearbyint(value.std * 1000.0);
  std::fesetround(saved);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.0f (%.0f.%.0f)", mean,
                std::floor(std_tenths / 10.0), std::fmod(std_tenths, 10.0));
  return buf;
}

std::string FormatReportTable(std::span<const AggregateReport> reports) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"method", "dataset", "k", "in-scope acc", "oos recall",
                  "top-k recall"});
  for (const auto& r : reports) {
    rows.push_back({r.method, r.dataset, std::to_string(r.k),
                    FormatPercentCell(r.in_scope_accuracy),
                    r.oos_recall ? FormatPercentCell(*r.oos_recall) : "-",
                    r.top_k_recall ? FormatPercentCell(*r.top_k_recall) : "-"});
  }
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (c > 0) out += " | ";
      out += rows[r][c];
      if (c + 1 < rows[r].size()) {
        out.append(width[c] - rows[r][c].size(), ' ');
      }
    }
    out += '\n';
    if (r == 0) {
      for (std::size_t c = 0; c < width.size(); ++c) {
        if (c > 0) out += "-+-";
        out.append(width[c], '-');
      }
      out += '\n';
    }
  }
  return out;
}

std::string PredictionsJsonl(std::span<const Prediction> predictions) {
  std::string out;
  for (const auto& p : predictions) {
    ordered_json j;
    j["text"] = p.text;
    j["gold"] = LabelOrOos(p.gold);
    j["predicted"] = LabelOrOos(p.predicted);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<Prediction> ParsePredictionsJsonl(const std::string& text) {
  std::vector<Prediction> out;
  std::size_t line_no = 0;
  for (const auto& line : SplitLines(text)) {
    ++line_no;
    if (IsBlank(line)) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out.push_back({j.at("text").get<std::string>(),
                     LabelFromFile(j.at("gold").get<std::string>()),
                     LabelFromFile(j.at("predicted").get<std::string>())});
    } catch (const nlohmann::json::exception& e) {
      throw DatasetError("predictions", line_no, e.what());
    }
  }
  return out;
}

}  // namespace intentkit
