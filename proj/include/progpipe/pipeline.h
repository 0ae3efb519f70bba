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

#ifndef PROGPIPE_PIPELINE_H_
#define PROGPIPE_PIPELINE_H_

// Four-stage pipelines: impute -> process -> predict -> calibrate.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "progpipe/calibrate.h"
#include "progpipe/dataset.h"
#include "progpipe/metrics.h"
#include "progpipe/models.h"
#include "progpipe/preprocess.h"

namespace progpipe {

enum class LearnerType { kLinear, kGbdtLeafWise, kGbdtOrdered };

std::string_view to_string(LearnerType type);
LearnerType parse_learner(std::string_view text);

struct LearnerSpec {
  LearnerType type = LearnerType::kLinear;
  LinearParams linear;
  GbdtParams gbdt;
  // Smoothing weight of the ordered target statistics (kGbdtOrdered).
  double prior_weight = 1.0;

  bool is_tree() const { return type != LearnerType::kLinear; }
  // 0 for linear learners.
  int tree_count() const { return is_tree() ? gbdt.n_trees : 0; }
  // Canonical name with hyper-parameters, e.g.
  // "gbdt-leafwise(trees=100,leaves=15,depth=8,min_leaf=20,lr=0.1,bins=64,l2=1)".
  std::string name() const;
  bool operator==(const LearnerSpec&) const = default;
};

nlohmann::json to_json(const LearnerSpec& spec);
LearnerSpec learner_spec_from_json(const nlohmann::json& doc);

struct PipelineConfig {
  ImputerKind imputer;
  ProcessorKind processor;
  LearnerSpec learner;
  CalibratorType calibrator = CalibratorType::kNone;

  // "imputer|processor|learner(...)|calibrator"
  std::string name() const;
  bool operator==(const PipelineConfig&) const = default;
};

nlohmann::json to_json(const PipelineConfig& config);
PipelineConfig pipeline_config_from_json(const nlohmann::json& doc);

class FittedLearner {
 public:
  FittedLearner() = default;

  const LearnerSpec& spec() const { return spec_; }
  Task task() const { return task_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const LinearModel* linear() const { return spec_.is_tree() ? nullptr : &linear_; }
  const TreeEnsemble* trees() const { return spec_.is_tree() ? &trees_ : nullptr; }
  const OrderedEncoder* encoder() const { return encoder_ ? &*encoder_ : nullptr; }

  // `processed` is the processor output and `imputed` the imputer output
  // for the same rows; the ordered learner reads categories from the latter.
  std::vector<double> predict(const Matrix& processed, const Cohort& imputed) const;

  nlohmann::json to_json() const;
  static FittedLearner from_json(const nlohmann::json& doc);

 private:
  friend FittedLearner fit_learner(const LearnerSpec&, Task, const Matrix&,
                                   const std::vector<std::string>&, const Cohort&,
                                   std::span<const double>, std::uint64_t);
  Matrix with_encoding(const Matrix& processed, const Matrix& encoded) const;

  LearnerSpec spec_;
  Task task_ = Task::kClassification;
  std::vector<std::string> feature_names_;
  LinearModel linear_;
  TreeEnsemble trees_;
  std::optional<OrderedEncoder> encoder_;
};

// `processed_names` labels the processed columns; the ordered learner adds
// one "<column>:target-stat" feature per categorical column.
FittedLearner fit_learner(const LearnerSpec& spec, Task task, const Matrix& processed,
                          const std::vector<std::string>& processed_names,
                          const Cohort& imputed, std::span<const double> y,
                          std::uint64_t seed);

class FittedPipeline {
 public:
  FittedPipeline() = default;

  const PipelineConfig& config() const { return config_; }
  Target target() const { return target_; }
  Task task() const { return task_for(target_); }
  const Schema& schema() const { return imputer_.schema(); }
  const FittedImputer& imputer() const { return imputer_; }
  const FittedProcessor& processor() const { return processor_; }
  const FittedLearner& learner() const { return learner_; }
  const Calibrator& calibrator() const { return calibrator_; }

  // Model output before calibration.
  std::vector<double> predict_raw(const Cohort& records) const;
  // Calibrated probability of the positive class, or predicted weeks.
  // Throws kSchemaMismatch.
  std::vector<double> predict(const Cohort& records) const;

  // Single-document bundle: config, fitted stages, schema, metric, version.
  nlohmann::json to_json(Metric metric) const;
  static FittedPipeline from_json(const nlohmann::json& doc);

 private:
  friend FittedPipeline fit_final(const PipelineConfig&, Target, const Cohort&, const Cohort&,
                                  std::uint64_t);
  PipelineConfig config_;
  Target target_ = Target::kCategory;
  FittedImputer imputer_;
  FittedProcessor processor_;
  FittedLearner learner_;
  Calibrator calibrator_;
};

// Fits imputer, processor and learner on `train` and the calibrator on
// `calibration`. Both must carry the target label. Stage errors are
// rethrown with the stage name prefixed. Regression accepts only the
// "none" calibrator (kSpecInvalid otherwise).
FittedPipeline fit_final(const PipelineConfig& config, Target target, const Cohort& train,
                         const Cohort& calibration, std::uint64_t seed);

// Label values of every record (throws kSchemaMismatch if one lacks it).
std::vector<double> label_vector(const Cohort& cohort, Target target);

FittedPipeline load_bundle(const std::string& path);
void save_bundle(const FittedPipeline& pipeline, Metric metric, const std::string& path);

}  // namespace progpipe

#endif  // PROGPIPE_PIPELINE_H_
