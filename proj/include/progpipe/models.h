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

#ifndef PROGPIPE_MODELS_H_
#define PROGPIPE_MODELS_H_

// Prediction-stage learners: L2-regularized linear models, histogram
// gradient-boosted trees (leaf-wise and level-wise growth), and the ordered
// target-statistics encoder used by the level-wise learner.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "progpipe/dataset.h"
#include "progpipe/matrix.h"

namespace progpipe {

enum class Task { kClassification, kRegression };

std::string_view to_string(Task task);
Task parse_task(std::string_view text);
// Classification for the two categorical labels, regression for weeks.
Task task_for(Target target);

// Logistic loss of raw score f against label y in {0,1}, and its first and
// second derivatives with respect to f.
double logistic_loss(double f, double y);
double logistic_gradient(double f, double y);
double logistic_hessian(double f);
double sigmoid(double f);

// ---------------------------------------------------------------------------
// Linear models

struct LinearParams {
  double l2 = 1e-3;
  double step = 1.0;  // initial step of the backtracking line search
  int max_epochs = 500;
  double tolerance = 1e-6;  // stop when the gradient max-norm drops below

  bool operator==(const LinearParams&) const = default;
};

class LinearModel {
 public:
  LinearModel() = default;
  LinearModel(Task task, std::vector<double> weights, double bias, double l2)
      : task_(task), weights_(std::move(weights)), bias_(bias), l2_(l2) {}

  Task task() const { return task_; }
  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  double l2() const { return l2_; }
  int epochs() const { return epochs_; }

  // Probabilities for classification, values for regression.
  // Throws kDimensionMismatch.
  std::vector<double> predict(const Matrix& x) const;

  nlohmann::json to_json() const;
  static LinearModel from_json(const nlohmann::json& doc);

 private:
  friend LinearModel fit_linear(Task, const Matrix&, std::span<const double>,
                                const LinearParams&);
  Task task_ = Task::kClassification;
  std::vector<double> weights_;
  double bias_ = 0.0;
  double l2_ = 0.0;
  int epochs_ = 0;
};

// Classification minimizes mean logistic loss + l2/2 |w|^2 by gradient
// descent, with features standardized internally and the penalty applied to
// the standardized weights; regression solves
// least squares + l2 |w|^2 (minimum-norm solution when l2 = 0).
// Throws kDimensionMismatch, kNonFinite.
LinearModel fit_linear(Task task, const Matrix& x, std::span<const double> y,
                       const LinearParams& params);

// Mean logistic objective of a linear model with weights w (bias last) and
// its gradient; exposed for derivative checks.
double logistic_objective(const Matrix& x, std::span<const double> y,
                          std::span<const double> w, double l2,
                          std::vector<double>* gradient);

// ---------------------------------------------------------------------------
// Gradient-boosted trees

enum class Growth { kLeafWise, kLevelWise };

struct GbdtParams {
  int n_trees = 100;
  int max_leaves = 15;
  int max_depth = 8;
  int min_samples_leaf = 20;
  double shrinkage = 0.1;
  int n_bins = 64;
  double l2_leaf = 1.0;
  std::uint64_t seed = 0;

  // Throws kSpecInvalid.
  void validate() const;
  bool operator==(const GbdtParams&) const = default;
};

// A node of a flattened tree. Leaves carry `value`; splits send x <=
// threshold left, x > threshold right, and NaN to the `missing_left` side.
struct TreeNode {
  bool leaf = true;
  double value = 0.0;
  int feature = -1;
  double threshold = 0.0;
  bool missing_left = false;
  double gain = 0.0;
  int left = -1;
  int right = -1;

  bool operator==(const TreeNode&) const = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(std::span<const double> row) const;
  // Index of the leaf a row lands in.
  int leaf_index(std::span<const double> row) const;
  int leaf_count() const;
};

class TreeEnsemble {
 public:
  TreeEnsemble() = default;

  Task task() const { return task_; }
  Growth growth() const { return growth_; }
  double base_score() const { return base_score_; }
  double shrinkage() const { return shrinkage_; }
  const std::vector<Tree>& trees() const { return trees_; }
  std::size_t feature_count() const { return feature_names_.size(); }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  void set_feature_names(std::vector<std::string> names);
  // Training loss after each boosting round (round 0 = base score only).
  const std::vector<double>& loss_history() const { return loss_history_; }

  // base + shrinkage * sum of tree outputs, before the link.
  std::vector<double> raw_predict(const Matrix& x) const;
  // Probabilities for classification, values for regression.
  // Throws kDimensionMismatch.
  std::vector<double> predict(const Matrix& x) const;

  nlohmann::json to_json() const;
  static TreeEnsemble from_json(const nlohmann::json& doc);

 private:
  friend TreeEnsemble fit_gbdt(Task, const Matrix&, std::span<const double>,
                               const GbdtParams&, Growth);
  Task task_ = Task::kClassification;
  Growth growth_ = Growth::kLeafWise;
  double base_score_ = 0.0;
  double shrinkage_ = 0.1;
  std::vector<Tree> trees_;
  std::vector<std::string> feature_names_;
  std::vector<double> loss_history_;
};

// Throws kDimensionMismatch, kDegenerateTarget (one class), kSpecInvalid.
TreeEnsemble fit_gbdt(Task task, const Matrix& x, std::span<const double> y,
                      const GbdtParams& params, Growth growth);

// Per-feature sum of split gains, descending; ties by feature name.
// Features that never split are left out.
std::vector<std::pair<std::string, double>> feature_importance(
    const TreeEnsemble& model);

// Histogram bin boundaries of one feature: midpoints between consecutive
// distinct values when there are at most n_bins of them, otherwise
// midpoints at approximate quantiles.
std::vector<double> bin_thresholds(std::span<const double> values, int n_bins);

// Best split of a single node over all features, found by histogram scan.
struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  bool missing_left = false;
  double gain = 0.0;
  bool valid() const { return feature >= 0; }
};
// g, h are per-row gradients and Hessians. Exposed for split-exactness
// checks; the fitter uses the same scan.
SplitCandidate best_histogram_split(const Matrix& x, std::span<const double> g,
                                    std::span<const double> h, int n_bins,
                                    double l2_leaf, int min_samples_leaf);

// Split gain 1/2 [GL^2/(HL+l2) + GR^2/(HR+l2) - G^2/(H+l2)].
double split_gain(double gl, double hl, double gr, double hr, double l2);

// ---------------------------------------------------------------------------
// Ordered target statistics

class OrderedEncoder {
 public:
  OrderedEncoder() = default;

  const std::vector<std::string>& columns() const { return columns_; }
  double prior() const { return prior_; }
  double prior_weight() const { return prior_weight_; }
  const std::vector<std::size_t>& permutation() const { return permutation_; }
  // Fit-time encodings of the training rows (original row order), one
  // column per encoded schema column. Row i only sees rows that precede it
  // in the permutation.
  const Matrix& training_encoding() const { return training_; }

  // Encodings from full-train statistics. Unseen or missing categories
  // encode to the prior.
  Matrix apply(const Cohort& cohort) const;

  nlohmann::json to_json() const;
  static OrderedEncoder from_json(const nlohmann::json& doc);

 private:
  friend OrderedEncoder fit_ordered_encoder_with_permutation(
      const Cohort&, std::span<const double>, double, std::vector<std::size_t>);

  struct Stat {
    double sum = 0.0;
    double count = 0.0;
  };
  double encode(const Stat& stat) const;

  std::vector<std::string> columns_;
  std::vector<std::size_t> sources_;  // schema index per encoded column
  double prior_ = 0.0;
  double prior_weight_ = 1.0;
  std::vector<std::size_t> permutation_;
  Matrix training_;
  std::vector<std::vector<std::pair<std::string, Stat>>> stats_;  // sorted by key
};

// Encodes every categorical schema column. Throws kDimensionMismatch,
// kInvalidArgument (prior_weight <= 0).
OrderedEncoder fit_ordered_encoder(const Cohort& train, std::span<const double> target,
                                   double prior_weight, std::uint64_t seed);
OrderedEncoder fit_ordered_encoder_with_permutation(const Cohort& train,
                                                    std::span<const double> target,
                                                    double prior_weight,
                                                    std::vector<std::size_t> permutation);

}  // namespace progpipe

#endif  // PROGPIPE_MODELS_H_
