/*
 * Copyright 2026 The progpipe Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "progpipe/metrics.h"

#include <algorithm>
#include <cmath>

#include "progpipe/error.h"
#include "progpipe/pipeline.h"
#include "progpipe/random.h"

namespace progpipe {

ClassReport class_report(std::span<const int> pred, std::span<const int> truth) {
  check(pred.size() == truth.size(), ErrorCode::kLengthMismatch,
        "class_report: " + std::to_string(pred.size()) + " predictions for " +
            std::to_string(truth.size()) + " labels");
  check(!pred.empty(), ErrorCode::kLengthMismatch, "class_report: no rows");
  ClassReport report;
  report.n = pred.size();
  for (std::size_t i = 0; i < pred.size(); ++i) {
    check((pred[i] == 0 || pred[i] == 1) && (truth[i] == 0 || truth[i] == 1),
          ErrorCode::kInvalidArgument, "class labels must be 0 or 1");
    ++report.confusion[truth[i]][pred[i]];
  }
  for (int c = 0; c < 2; ++c) {
    const std::size_t tp = report.confusion[c][c];
    const std::size_t predicted = report.confusion[0][c] + report.confusion[1][c];
    const std::size_t actual = report.confusion[c][0] + report.confusion[c][1];
    ClassMetrics& m = report.per_class[c];
    m.support = actual;
    m.precision = predicted > 0 ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    m.recall = actual > 0 ? static_cast<double>(tp) / static_cast<double>(actual) : 0.0;
    m.f1 = m.precision + m.recall > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
  }
  report.macro_precision = (report.per_class[0].precision + report.per_class[1].precision) / 2.0;
  report.macro_recall = (report.per_class[0].recall + report.per_class[1].recall) / 2.0;
  report.macro_f1 = (report.per_class[0].f1 + report.per_class[1].f1) / 2.0;
  return report;
}

RegReport reg_report(std::span<const double> pred, std::span<const double> truth) {
  check(pred.size() == truth.size(), ErrorCode::kLengthMismatch,
        "reg_report: " + std::to_string(pred.size()) + " predictions for " +
            std::to_string(truth.size()) + " targets");
  check(!pred.empty(), ErrorCode::kLengthMismatch, "reg_report: no rows");
  const double n = static_cast<double>(pred.size());
  double mean = 0.0;
  for (double t : truth) mean += t;
  mean /= n;
  double abs_error = 0.0, ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double r = pred[i] - truth[i];
    abs_error += std::abs(r);
    ss_res += r * r;
    ss_tot += (truth[i] - mean) * (truth[i] - mean);
  }
  RegReport report;
  report.n = pred.size();
  report.mae = abs_error / n;
  if (ss_tot == 0.0) {
    check(ss_res == 0.0, ErrorCode::kConstantTruth,
          "R^2 is undefined: truth is constant and predictions differ from it");
    report.r2 = 0.0;
  } else {
    report.r2 = 1.0 - ss_res / ss_tot;
  }
  return report;
}

std::vector<int> threshold_labels(std::span<const double> probabilities) {
  std::vector<int> out(probabilities.size());
  for (std::size_t i = 0; i < probabilities.size(); ++i) out[i] = probabilities[i] >= 0.5 ? 1 : 0;
  return out;
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::kMacroF1: return "macro-f1";
    case Metric::kNegMae: return "neg-mae";
    case Metric::kR2: return "r2";
  }
  return "macro-f1";
}

Metric parse_metric(std::string_view text) {
  if (text == "macro-f1") return Metric::kMacroF1;
  if (text == "neg-mae") return Metric::kNegMae;
  if (text == "r2") return Metric::kR2;
  fail(ErrorCode::kSpecInvalid, "unknown metric '" + std::string(text) + "'");
}

bool metric_is_classification(Metric metric) { return metric == Metric::kMacroF1; }

double score(Metric metric, std::span<const double> predictions, std::span<const double> truth) {
  switch (metric) {
    case Metric::kMacroF1: {
      std::vector<int> labels(truth.size());
      for (std::size_t i = 0; i < truth.size(); ++i) labels[i] = truth[i] >= 0.5 ? 1 : 0;
      return class_report(threshold_labels(predictions), labels).macro_f1;
    }
    case Metric::kNegMae: return -reg_report(predictions, truth).mae;
    case Metric::kR2: return reg_report(predictions, truth).r2;
  }
  return 0.0;
}

nlohmann::json to_json(const ClassReport& report) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& m : report.per_class) {
    classes.push_back({{"precision", m.precision},
                       {"recall", m.recall},
                       {"f1", m.f1},
                       {"support", m.support}});
  }
  return {{"classes", classes},
          {"macro", {{"precision", report.macro_precision},
                     {"recall", report.macro_recall},
                     {"f1", report.macro_f1}}},
          {"confusion", {{report.confusion[0][0], report.confusion[0][1]},
                         {report.confusion[1][0], report.confusion[1][1]}}},
          {"n", report.n}};
}

nlohmann::json to_json(const RegReport& report) {
  return {{"mae", report.mae}, {"r2", report.r2}, {"n", report.n}};
}

std::vector<std::pair<std::string, double>> permutation_importance(
    const FittedPipeline& pipeline, const Cohort& data, Metric metric, int n_repeats,
    std::uint64_t seed) {
  check(n_repeats >= 1, ErrorCode::kInvalidArgument, "n_repeats must be >= 1");
  const std::vector<double> truth = label_vector(data, pipeline.target());
  const double baseline = score(metric, pipeline.predict(data), truth);
  Cohort shuffled = data;
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t c = 0; c < data.schema.columns.size(); ++c) {
    const std::string& name = data.schema.columns[c].name;
    double total_drop = 0.0;
    for (int repeat = 0; repeat < n_repeats; ++repeat) {
      Rng rng(derive_seed(derive_seed(seed, name), "repeat", static_cast<std::uint64_t>(repeat)));
      const std::vector<std::size_t> order = rng.permutation(data.size());
      for (std::size_t r = 0; r < data.size(); ++r) {
        shuffled.records[r].values[c] = data.records[order[r]].values[c];
      }
      total_drop += baseline - score(metric, pipeline.predict(shuffled), truth);
    }
    for (std::size_t r = 0; r < data.size(); ++r) {
      shuffled.records[r].values[c] = data.records[r].values[c];
    }
    out.emplace_back(name, total_drop / static_cast<double>(n_repeats));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

}  // namespace progpipe
