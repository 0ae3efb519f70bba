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

#ifndef PROGPIPE_METRICS_H_
#define PROGPIPE_METRICS_H_

// Evaluation metrics: per-class and macro precision/recall/F1, MAE and R^2,
// and permutation importance of a fitted pipeline.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "progpipe/dataset.h"

namespace progpipe {

class FittedPipeline;

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // rows whose truth is this class
};

// Two classes: 0 (negative) and 1 (positive).
struct ClassReport {
  std::array<ClassMetrics, 2> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  // confusion[truth][pred]
  std::array<std::array<std::size_t, 2>, 2> confusion{};
  std::size_t n = 0;
};

struct RegReport {
  double mae = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

// Labels must be 0 or 1. Throws kLengthMismatch (also on empty input) and
// kInvalidArgument.
ClassReport class_report(std::span<const int> pred, std::span<const int> truth);
// r2 = 1 - SSres/SStot; 0 when both sums are 0. Throws kLengthMismatch and
// kConstantTruth (SStot = 0 with nonzero residuals).
RegReport reg_report(std::span<const double> pred, std::span<const double> truth);

// Probability >= 0.5 is the positive class.
std::vector<int> threshold_labels(std::span<const double> probabilities);

enum class Metric { kMacroF1, kNegMae, kR2 };

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view text);
bool metric_is_classification(Metric metric);

// Higher is better for every metric. Classification predictions are
// probabilities; truth is 0/1 (or weeks for regression metrics).
double score(Metric metric, std::span<const double> predictions,
             std::span<const double> truth);

nlohmann::json to_json(const ClassReport& report);
nlohmann::json to_json(const RegReport& report);

// Mean score drop when one schema column is shuffled across rows, averaged
// over n_repeats shuffles; sorted descending, ties by column name. Data must
// carry the pipeline's target label.
std::vector<std::pair<std::string, double>> permutation_importance(
    const FittedPipeline& pipeline, const Cohort& data, Metric metric, int n_repeats,
    std::uint64_t seed);

}  // namespace progpipe

#endif  // PROGPIPE_METRICS_H_
