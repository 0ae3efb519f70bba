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

#include "progpipe/pipeline.h"

#include <fstream>
#include <sstream>

#include "progpipe/csv.h"
#include "progpipe/error.h"
#include "progpipe/random.h"

namespace progpipe {

std::string_view to_string(LearnerType type) {
  switch (type) {
    case LearnerType::kLinear: return "linear";
    case LearnerType::kGbdtLeafWise: return "gbdt-leafwise";
    case LearnerType::kGbdtOrdered: return "gbdt-ordered";
  }
  return "linear";
}

LearnerType parse_learner(std::string_view text) {
  if (text == "linear") return LearnerType::kLinear;
  if (text == "gbdt-leafwise") return LearnerType::kGbdtLeafWise;
  if (text == "gbdt-ordered") return LearnerType::kGbdtOrdered;
  fail(ErrorCode::kSpecInvalid, "unknown learner '" + std::string(text) + "'");
}

std::string LearnerSpec::name() const {
  using csv::format_double;
  std::string out(to_string(type));
  if (type == LearnerType::kLinear) return out + "(l2=" + format_double(linear.l2) + ")";
  out += "(trees=" + std::to_string(gbdt.n_trees) + ",leaves=" + std::to_string(gbdt.max_leaves) +
         ",depth=" + std::to_string(gbdt.max_depth) +
         ",min_leaf=" + std::to_string(gbdt.min_samples_leaf) +
         ",lr=" + format_double(gbdt.shrinkage) + ",bins=" + std::to_string(gbdt.n_bins) +
         ",l2=" + format_double(gbdt.l2_leaf);
  if (type == LearnerType::kGbdtOrdered) out += ",prior_weight=" + format_double(prior_weight);
  return out + ")";
}

nlohmann::json to_json(const LearnerSpec& spec) {
  nlohmann::json doc = {{"name", std::string(to_string(spec.type))}};
  if (spec.type == LearnerType::kLinear) {
    doc["l2"] = spec.linear.l2;
    doc["max_epochs"] = spec.linear.max_epochs;
    doc["tolerance"] = spec.linear.tolerance;
    return doc;
  }
  doc["n_trees"] = spec.gbdt.n_trees;
  doc["max_leaves"] = spec.gbdt.max_leaves;
  doc["max_depth"] = spec.gbdt.max_depth;
  doc["min_samples_leaf"] = spec.gbdt.min_samples_leaf;
  doc["shrinkage"] = spec.gbdt.shrinkage;
  doc["n_bins"] = spec.gbdt.n_bins;
  doc["l2_leaf"] = spec.gbdt.l2_leaf;
  doc["seed"] = spec.gbdt.seed;
  if (spec.type == LearnerType::kGbdtOrdered) doc["prior_weight"] = spec.prior_weight;
  return doc;
}

LearnerSpec learner_spec_from_json(const nlohmann::json& doc) {
  LearnerSpec spec;
  spec.type = parse_learner(doc.at("name").get<std::string>());
  if (spec.type == LearnerType::kLinear) {
    spec.linear.l2 = doc.value("l2", spec.linear.l2);
    spec.linear.max_epochs = doc.value("max_epochs", spec.linear.max_epochs);
    spec.linear.tolerance = doc.value("tolerance", spec.linear.tolerance);
    check(spec.linear.l2 >= 0.0, ErrorCode::kSpecInvalid, "linear l2 must be >= 0");
    return spec;
  }
  spec.gbdt.n_trees = doc.value("n_trees", spec.gbdt.n_trees);
  spec.gbdt.max_leaves = doc.value("max_leaves", spec.gbdt.max_leaves);
  spec.gbdt.max_depth = doc.value("max_depth", spec.gbdt.max_depth);
  spec.gbdt.min_samples_leaf = doc.value("min_samples_leaf", spec.gbdt.min_samples_leaf);
  spec.gbdt.shrinkage = doc.value("shrinkage", spec.gbdt.shrinkage);
  spec.gbdt.n_bins = doc.value("n_bins", spec.gbdt.n_bins);
  spec.gbdt.l2_leaf = doc.value("l2_leaf", spec.gbdt.l2_leaf);
  spec.gbdt.seed = doc.value("seed", spec.gbdt.seed);
  spec.prior_weight = doc.value("prior_weight", spec.prior_weight);
  spec.gbdt.validate();
  check(spec.prior_weight > 0.0, ErrorCode::kSpecInvalid, "prior_weight must be positive");
  return spec;
}

std::string PipelineConfig::name() const {
  return imputer.name() + "|" + processor.name() + "|" + learner.name() + "|" +
         std::string(to_string(calibrator));
}

nlohmann::json to_json(const PipelineConfig& config) {
  return {{"imputer", to_json(config.imputer)},
          {"processor", to_json(config.processor)},
          {"learner", to_json(config.learner)},
          {"calibrator", std::string(to_string(config.calibrator))},
          {"name", config.name()}};
}

PipelineConfig pipeline_config_from_json(const nlohmann::json& doc) {
  PipelineConfig config;
  config.imputer = imputer_kind_from_json(doc.at("imputer"));
  config.processor = processor_kind_from_json(doc.at("processor"));
  config.learner = learner_spec_from_json(doc.at("learner"));
  config.calibrator = parse_calibrator(doc.at("calibrator").get<std::string>());
  return config;
}

// ---------------------------------------------------------------------------

Matrix FittedLearner::with_encoding(const Matrix& processed, const Matrix& encoded) const {
  Matrix out(processed.rows(), processed.cols() + encoded.cols());
  for (std::size_t r = 0; r < processed.rows(); ++r) {
    auto dst = out.row(r);
    auto a = processed.row(r);
    auto b = encoded.row(r);
    std::copy(a.begin(), a.end(), dst.begin());
    std::copy(b.begin(), b.end(), dst.begin() + static_cast<std::ptrdiff_t>(a.size()));
  }
  return out;
}

FittedLearner fit_learner(const LearnerSpec& spec, Task task, const Matrix& processed,
                          const std::vector<std::string>& processed_names,
                          const Cohort& imputed, std::span<const double> y,
                          std::uint64_t seed) {
  check(processed_names.size() == processed.cols(), ErrorCode::kDimensionMismatch,
        "one feature name per processed column expected");
  FittedLearner out;
  out.spec_ = spec;
  out.task_ = task;
  out.feature_names_ = processed_names;
  switch (spec.type) {
    case LearnerType::kLinear:
      out.linear_ = fit_linear(task, processed, y, spec.linear);
      break;
    case LearnerType::kGbdtLeafWise:
      out.trees_ = fit_gbdt(task, processed, y, spec.gbdt, Growth::kLeafWise);
      break;
    case LearnerType::kGbdtOrdered: {
      out.encoder_ = fit_ordered_encoder(imputed, y, spec.prior_weight,
                                         derive_seed(seed, "ordered", spec.gbdt.seed));
      for (const auto& column : out.encoder_->columns()) {
        out.feature_names_.push_back(column + ":target-stat");
      }
      const Matrix x = out.with_encoding(processed, out.encoder_->training_encoding());
      out.trees_ = fit_gbdt(task, x, y, spec.gbdt, Growth::kLevelWise);
      break;
    }
  }
  if (spec.is_tree()) out.trees_.set_feature_names(out.feature_names_);
  return out;
}

std::vector<double> FittedLearner::predict(const Matrix& processed, const Cohort& imputed) const {
  switch (spec_.type) {
    case LearnerType::kLinear: return linear_.predict(processed);
    case LearnerType::kGbdtLeafWise: return trees_.predict(processed);
    case LearnerType::kGbdtOrdered:
      return trees_.predict(with_encoding(processed, encoder_->apply(imputed)));
  }
  return {};
}

nlohmann::json FittedLearner::to_json() const {
  nlohmann::json doc = {{"spec", progpipe::to_json(spec_)},
                        {"task", std::string(to_string(task_))},
                        {"feature_names", feature_names_}};
  if (spec_.is_tree()) {
    doc["model"] = trees_.to_json();
  } else {
    doc["model"] = linear_.to_json();
  }
  if (encoder_) doc["encoder"] = encoder_->to_json();
  return doc;
}

FittedLearner FittedLearner::from_json(const nlohmann::json& doc) {
  FittedLearner out;
  out.spec_ = learner_spec_from_json(doc.at("spec"));
  out.task_ = parse_task(doc.at("task").get<std::string>());
  out.feature_names_ = doc.value("feature_names", std::vector<std::string>{});
  if (out.spec_.is_tree()) {
    out.trees_ = TreeEnsemble::from_json(doc.at("model"));
  } else {
    out.linear_ = LinearModel::from_json(doc.at("model"));
  }
  if (doc.contains("encoder")) out.encoder_ = OrderedEncoder::from_json(doc.at("encoder"));
  check(out.spec_.type != LearnerType::kGbdtOrdered || out.encoder_.has_value(),
        ErrorCode::kSchemaMismatch, "ordered learner bundle lacks its encoder");
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> label_vector(const Cohort& cohort, Target target) {
  std::vector<double> y(cohort.size());
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    const auto value = label_value(cohort.records[i], target);
    check(value.has_value(), ErrorCode::kSchemaMismatch,
          "record " + std::to_string(i) + " (patient " + cohort.records[i].patient_id +
              ") has no " + std::string(label_column(target)) + " label");
    y[i] = *value;
  }
  return y;
}

namespace {

template <typename Fn>
auto stage(std::string_view name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(name) + " stage: " + e.what());
  }
}

}  // namespace

FittedPipeline fit_final(const PipelineConfig& config, Target target, const Cohort& train,
                         const Cohort& calibration, std::uint64_t seed) {
  const Task task = task_for(target);
  check(task == Task::kClassification || config.calibrator == CalibratorType::kNone,
        ErrorCode::kSpecInvalid, "regression pipelines take no calibrator");
  const std::vector<double> y = label_vector(train, target);

  FittedPipeline out;
  out.config_ = config;
  out.target_ = target;
  out.imputer_ = stage("imputer", [&] { return fit_imputer(config.imputer, train); });
  const Cohort imputed = out.imputer_.apply(train);
  out.processor_ = stage("processor", [&] { return fit_processor(config.processor, imputed, y); });
  const Matrix processed = out.processor_.apply(imputed);
  out.learner_ = stage("learner", [&] {
    return fit_learner(config.learner, task, processed, out.processor_.feature_names(), imputed,
                       y, seed);
  });
  if (config.calibrator != CalibratorType::kNone) {
    out.calibrator_ = stage("calibrator", [&] {
      const std::vector<double> scores = out.predict_raw(calibration);
      const std::vector<double> labels = label_vector(calibration, target);
      return fit_calibrator(config.calibrator, scores, labels);
    });
  }
  return out;
}

std::vector<double> FittedPipeline::predict_raw(const Cohort& records) const {
  require_same_columns(imputer_.schema(), records.schema);
  const Cohort imputed = imputer_.apply(records);
  const Matrix processed = processor_.apply(imputed);
  return learner_.predict(processed, imputed);
}

std::vector<double> FittedPipeline::predict(const Cohort& records) const {
  std::vector<double> out = predict_raw(records);
  if (calibrator_.type() != CalibratorType::kNone) out = calibrator_.apply(out);
  return out;
}

nlohmann::json FittedPipeline::to_json(Metric metric) const {
  return {{"format", "progpipe-bundle"},
          {"version", PROGPIPE_VERSION},
          {"config", progpipe::to_json(config_)},
          {"target", std::string(to_string(target_))},
          {"task", std::string(to_string(task()))},
          {"metric", std::string(to_string(metric))},
          {"schema", schema_to_json(imputer_.schema())},
          {"imputer", imputer_.to_json()},
          {"processor", processor_.to_json()},
          {"learner", learner_.to_json()},
          {"calibrator", calibrator_.to_json()}};
}

FittedPipeline FittedPipeline::from_json(const nlohmann::json& doc) {
  check(doc.value("format", "") == "progpipe-bundle", ErrorCode::kSchemaMismatch,
        "not a pipeline bundle");
  FittedPipeline out;
  out.config_ = pipeline_config_from_json(doc.at("config"));
  out.target_ = parse_target(doc.at("target").get<std::string>());
  out.imputer_ = FittedImputer::from_json(doc.at("imputer"));
  out.processor_ = FittedProcessor::from_json(doc.at("processor"));
  out.learner_ = FittedLearner::from_json(doc.at("learner"));
  out.calibrator_ = Calibrator::from_json(doc.at("calibrator"));
  return out;
}

FittedPipeline load_bundle(const std::string& path) {
  std::ifstream in(path);
  check(in.good(), ErrorCode::kIo, "cannot open bundle '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kSchemaMismatch, "bundle '" + path + "' is not valid JSON: " + e.what());
  }
  try {
    return FittedPipeline::from_json(doc);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kSchemaMismatch, "bundle '" + path + "' is malformed: " + e.what());
  }
}

void save_bundle(const FittedPipeline& pipeline, Metric metric, const std::string& path) {
  std::ofstream out(path);
  check(out.good(), ErrorCode::kIo, "cannot write bundle '" + path + "'");
  out << pipeline.to_json(metric).dump(1) << "\n";
  check(out.good(), ErrorCode::kIo, "failed writing bundle '" + path + "'");
}

}  // namespace progpipe
