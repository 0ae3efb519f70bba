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

#ifndef PROGPIPE_EXPERIMENT_H_
#define PROGPIPE_EXPERIMENT_H_

// Library side of the command-line tool: data generation, the method
// comparison matrix, training, prediction and report summaries. Every
// command writes a manifest.json next to its outputs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "progpipe/dataset.h"
#include "progpipe/search.h"
#include "progpipe/synthgen.h"

namespace progpipe {

// File names inside a data directory.
inline constexpr const char* kWoundCsv = "wound.csv";
inline constexpr const char* kEpisodeCsv = "episode.csv";
inline constexpr const char* kCombinedCsv = "combined.csv";
inline constexpr const char* kWoundSchemaJson = "wound_schema.json";
inline constexpr const char* kEpisodeSchemaJson = "episode_schema.json";
inline constexpr const char* kCombinedSchemaJson = "combined_schema.json";
inline constexpr const char* kHistogramsCsv = "histograms.csv";
inline constexpr const char* kManifestJson = "manifest.json";

struct SynthgenOptions {
  std::optional<std::string> spec_path;  // default_spec() when absent
  std::string out_dir;
  std::optional<std::uint64_t> seed;     // overrides the cohort spec's seed
};

// Writes the wound, episode and combined cohorts with their schemas,
// plot-ready histograms and a manifest. Returns the written paths.
std::vector<std::string> cmd_synthgen(const SynthgenOptions& options);

// Loads the cohort of a granularity from a data directory; combined data
// is the join of the wound and episode files.
Cohort load_granularity(const std::string& data_dir, Granularity granularity);

// Throws kInvalidTaskGranularity for recurrence outside wound data.
void check_task_granularity(Granularity granularity, Target target);

// The four compared methods, derived from one search space S:
//   linear-only:    first imputer/processor/calibrator, S's linear learners
//   tree-only:      the same with S's leaf-wise tree learners
//   base-space:     S without tree learners
//   extended-space: S
struct MethodSpace {
  std::string name;
  ConfigSpace space;
};
std::vector<MethodSpace> method_spaces(const ConfigSpace& space);

struct ExperimentOptions {
  std::optional<std::string> space_path;  // default_space() when absent
  std::string data_dir;
  std::string out_dir;
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::kExhaustive;
  std::size_t budget = 0;
  std::optional<int> k_folds;  // overrides the space's k_folds
  // Both unset: the full matrix of seven reports.
  std::optional<Granularity> granularity;
  std::optional<Target> task;
  int importance_repeats = 3;
};

// The (granularity, task) pairs an options object selects.
std::vector<std::pair<Granularity, Target>> experiment_matrix(const ExperimentOptions& options);

// Runs every method on one (granularity, task) pair. The cohort is split
// 70/10/20 by patient; each method searches on the train part, refits
// with the calibrator on the validation part and is scored on the test
// part. Returns the report document.
nlohmann::json run_experiment(const Cohort& cohort, Granularity granularity, Target task,
                              const ConfigSpace& space, const ExperimentOptions& options);

// Plain-text table of a report document.
std::string render_report(const nlohmann::json& report);

// Writes <granularity>_<task>.json and .txt per selected pair plus a
// manifest. Returns the written paths.
std::vector<std::string> cmd_experiment(const ExperimentOptions& options);

struct TrainOptions {
  std::optional<std::string> space_path;
  std::string data_dir;
  std::string out_path;  // bundle JSON
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::kExhaustive;
  std::size_t budget = 0;
  std::optional<int> k_folds;
  Granularity granularity = Granularity::kWound;
  Target task = Target::kCategory;
};

// Searches on the train+valid split, refits, scores the test split and
// writes the bundle. Returns the written paths.
std::vector<std::string> cmd_train(const TrainOptions& options);

// Appends risk_prob, risk_class and weeks_pred to each input row, passing
// input cells through verbatim. Throws kSchemaMismatch naming missing and
// unknown columns.
std::vector<std::string> cmd_predict(const std::string& bundle_path, const std::string& input_csv,
                                     const std::string& out_csv);

// Renders every report JSON in a directory into summary.txt.
std::vector<std::string> cmd_report(const std::string& dir);

}  // namespace progpipe

#endif  // PROGPIPE_EXPERIMENT_H_
