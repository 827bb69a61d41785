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

#ifndef INTENTKIT_EVAL_H_
#define INTENTKIT_EVAL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace intentkit {

// One test row. nullopt labels mean out-of-scope.
struct Prediction {
  std::string text;
  std::optional<std::string> gold;
  std::optional<std::string> predicted;

  bool operator==(const Prediction&) const = default;
};

struct RankedRow {
  std::string gold;
  std::vector<std::string> ranked;
};

struct RunResult {
  std::uint64_t seed = 0;
  std::string method;
  std::vector<Prediction> predictions;
  // Retrieval rankings for filtered methods; empty otherwise.
  std::vector<RankedRow> rankings;
  std::size_t ranking_k = 0;
};

// Correct / total over rows whose gold is in-scope. Predicting OOS for an
// in-scope row counts as wrong. Throws InvalidArgument without in-scope rows.
double InScopeAccuracy(std::span<const Prediction> predictions);

// Fraction of out-of-scope rows predicted out-of-scope; nullopt when the run
// has no out-of-scope rows.
std::optional<double> OosRecall(std::span<const Prediction> predictions);

// Fraction of rows whose gold appears among the first k ranked names.
// Throws InvalidArgument on an empty list or k == 0.
double TopKRecall(std::span<const RankedRow> rows, std::size_t k);

struct MetricsReport {
  double in_scope_accuracy = 0.0;
  std::optional<double> oos_recall;
  std::optional<double> top_k_recall;
  std::size_t n_in_scope = 0;
  std::size_t n_oos = 0;
};

MetricsReport ComputeMetrics(const RunResult& run);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample (n - 1) standard deviation; 0 for one value
};

// Throws InvalidArgument on an empty list.
MeanStd MeanAndSampleStd(std::span<const double> values);

struct AggregateReport {
  std::string method;
  std::string dataset;
  int k = 0;
  std::vector<std::uint64_t> seeds;
  MeanStd in_scope_accuracy;
  std::optional<MeanStd> oos_recall;
  std::optional<MeanStd> top_k_recall;
};

// Aggregates per-run metrics. A metric is reported only if every run has it.
// Throws InvalidArgument on an empty run list.
AggregateReport Aggregate(std::span<const RunResult> runs,
                          const std::string& dataset, int k);

std::string ReportJson(const AggregateReport& report);
// Throws DatasetError on malformed input.
AggregateReport ParseReportJson(const std::string& text);

// "63 (1.1)": mean and std in percentage points, the mean rounded half to
// even to an integer and the std to one decimal.
std::string FormatPercentCell(const MeanStd& value);

// Aligned plain-text table, one row per report.
std::string FormatReportTable(std::span<const AggregateReport> reports);

// {"text", "gold", "predicted"} per line; out-of-scope as "__oos__".
std::string PredictionsJsonl(std::span<const Prediction> predictions);
std::vector<Prediction> ParsePredictionsJsonl(const std::string& text);

}  // namespace intentkit

#endif  // INTENTKIT_EVAL_H_
