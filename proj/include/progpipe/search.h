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

#ifndef PROGPIPE_SEARCH_H_
#define PROGPIPE_SEARCH_H_

// Pipeline configuration search: K-fold cross-validated scoring of each
// candidate configuration and selection of the best one.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "progpipe/pipeline.h"

namespace progpipe {

struct ConfigSpace {
  std::vector<ImputerKind> imputers;
  std::vector<ProcessorKind> processors;
  std::vector<LearnerSpec> learners;  // one entry per grid point
  std::vector<CalibratorType> calibrators;
  Metric classification_metric = Metric::kMacroF1;
  Metric regression_metric = Metric::kNegMae;
  int k_folds = 5;

  Metric metric_for(Task task) const {
    return task == Task::kClassification ? classification_metric : regression_metric;
  }
  // Throws kEmptySpace when a stage list is empty, kSpecInvalid otherwise.
  void validate() const;
  // Regression ignores the calibrator list (only "none" applies).
  std::size_t grid_size(Task task) const;
  // Every grid point, imputer-major, in list order.
  std::vector<PipelineConfig> configs(Task task) const;
};

// Learner entries may give any hyper-parameter as a list; lists expand to
// their cartesian product.
ConfigSpace space_from_json(const nlohmann::json& doc);
nlohmann::json space_to_json(const ConfigSpace& space);
ConfigSpace load_space(const std::string& path);
// Small built-in space: two imputers, two processors, one linear and one
// leaf-wise learner, two calibrators.
ConfigSpace default_space();

// Patient-grouped two-way split: groups are shuffled and taken until the
// first part holds at least `fraction` of the rows. Both parts are
// nonempty when there are two or more patients.
struct Holdout {
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;
};
Holdout holdout_split(const Cohort& cohort, double fraction, std::uint64_t seed);

struct CvScore {
  std::vector<double> folds;
  double mean = 0.0;
};

// Per fold: stages fit on 80% of the fold's training patients, the
// calibrator on the other 20%, the metric on the held-out fold.
// Throws kFoldFailure naming the fold and stage.
CvScore cv_score(const PipelineConfig& config, Target target, const Cohort& data, int k,
                 Metric metric, std::uint64_t seed);

enum class Strategy { kExhaustive, kRandom, kHalving };

std::string_view to_string(Strategy strategy);
Strategy parse_strategy(std::string_view text);

struct SearchOptions {
  Strategy strategy = Strategy::kExhaustive;
  // Candidate count for random and halving; ignored by exhaustive.
  std::size_t budget = 0;
  double eta = 3.0;  // halving keeps ceil(n / eta) per rung
  std::uint64_t seed = 0;
  // 0 reads PROG_PIPE_THREADS, falling back to the hardware thread count.
  int threads = 0;
  // Budgets above the grid size throw kBudgetExceedsGrid instead of being
  // clamped.
  bool strict_budget = false;
};

struct LeaderboardEntry {
  PipelineConfig config;
  std::vector<double> fold_scores;
  double mean = 0.0;
  bool failed = false;
  std::string error;
};

struct SearchResult {
  FittedPipeline best;
  // Sorted by mean descending, then fewer trees, then config name. For
  // halving this is the last rung.
  std::vector<LeaderboardEntry> leaderboard;
  std::size_t evaluations = 0;  // cv_score calls
  std::size_t grid_size = 0;
  Metric metric = Metric::kMacroF1;
};

// Searches on `train`; the winner is refit on all of `train` with its
// calibrator fit on `calibration`, or on an inner 80/20 patient split of
// `train` when no calibration cohort is given. Throws kEmptySpace,
// kBudgetExceedsGrid, kInvalidArgument, and kFoldFailure when every
// candidate fails.
SearchResult search(const ConfigSpace& space, Target target, const Cohort& train,
                    const SearchOptions& options, const Cohort* calibration = nullptr);

nlohmann::json leaderboard_to_json(const std::vector<LeaderboardEntry>& leaderboard);

// Worker count from PROG_PIPE_THREADS (>= 1) or the hardware.
int configured_threads();

}  // namespace progpipe

#endif  // PROGPIPE_SEARCH_H_
