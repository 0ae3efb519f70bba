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

#include "progpipe/models.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

#include "progpipe/error.h"
#include "progpipe/random.h"

namespace progpipe {

std::string_view to_string(Task task) {
  return task == Task::kClassification ? "classification" : "regression";
}

Task parse_task(std::string_view text) {
  if (text == "classification") return Task::kClassification;
  if (text == "regression") return Task::kRegression;
  fail(ErrorCode::kSpecInvalid, "unknown task kind '" + std::string(text) + "'");
}

Task task_for(Target target) {
  return target == Target::kWeeks ? Task::kRegression : Task::kClassification;
}

namespace {

double softplus(double f) {
  return f > 0.0 ? f + std::log1p(std::exp(-f)) : std::log1p(std::exp(f));
}

void require_finite(const Matrix& x, std::span<const double> y) {
  for (double v : x.data()) {
    check(std::isfinite(v), ErrorCode::kNonFinite, "linear model input contains NaN or inf");
  }
  for (double v : y) {
    check(std::isfinite(v), ErrorCode::kNonFinite, "linear model target contains NaN or inf");
  }
}

}  // namespace

double sigmoid(double f) {
  if (f >= 0.0) return 1.0 / (1.0 + std::exp(-f));
  const double e = std::exp(f);
  return e / (1.0 + e);
}

double logistic_loss(double f, double y) { return softplus(f) - y * f; }
double logistic_gradient(double f, double y) { return sigmoid(f) - y; }
double logistic_hessian(double f) {
  const double p = sigmoid(f);
  return p * (1.0 - p);
}

// ---------------------------------------------------------------------------
// Linear models

double logistic_objective(const Matrix& x, std::span<const double> y,
                          std::span<const double> w, double l2,
                          std::vector<double>* gradient) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (gradient) gradient->assign(d + 1, 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto row = x.row(i);
    double f = w[d];
    for (std::size_t j = 0; j < d; ++j) f += w[j] * row[j];
    loss += logistic_loss(f, y[i]);
    if (gradient) {
      const double g = logistic_gradient(f, y[i]);
      for (std::size_t j = 0; j < d; ++j) (*gradient)[j] += g * row[j];
      (*gradient)[d] += g;
    }
  }
  const double inv_n = n > 0 ? 1.0 / static_cast<double>(n) : 0.0;
  loss *= inv_n;
  double penalty = 0.0;
  for (std::size_t j = 0; j < d; ++j) penalty += w[j] * w[j];
  loss += 0.5 * l2 * penalty;
  if (gradient) {
    for (std::size_t j = 0; j <= d; ++j) (*gradient)[j] *= inv_n;
    for (std::size_t j = 0; j < d; ++j) (*gradient)[j] += l2 * w[j];
  }
  return loss;
}

LinearModel fit_linear(Task task, const Matrix& x, std::span<const double> y,
                       const LinearParams& params) {
  check(x.rows() == y.size(), ErrorCode::kDimensionMismatch,
        "linear model: " + std::to_string(x.rows()) + " rows but " +
            std::to_string(y.size()) + " targets");
  check(x.rows() > 0, ErrorCode::kDimensionMismatch, "linear model: no rows");
  check(params.l2 >= 0.0 && params.max_epochs >= 0 && params.step > 0.0,
        ErrorCode::kSpecInvalid, "linear model: invalid parameters");
  require_finite(x, y);
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();

  LinearModel model;
  model.task_ = task;
  model.l2_ = params.l2;

  if (task == Task::kRegression) {
    Eigen::MatrixXd a(n, d);
    Eigen::VectorXd b(n);
    Eigen::VectorXd means = Eigen::VectorXd::Zero(d);
    double y_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) means[j] += x(i, j);
      y_mean += y[i];
    }
    means /= static_cast<double>(n);
    y_mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) a(i, j) = x(i, j) - means[j];
      b[i] = y[i] - y_mean;
    }
    Eigen::VectorXd w(d);
    if (d == 0) {
      w.resize(0);
    } else if (params.l2 > 0.0) {
      Eigen::MatrixXd gram = a.transpose() * a;
      gram.diagonal().array() += params.l2;
      w = gram.ldlt().solve(a.transpose() * b);
    } else {
      w = a.completeOrthogonalDecomposition().solve(b);
    }
    model.weights_.assign(w.data(), w.data() + d);
    model.bias_ = y_mean - (d > 0 ? means.dot(w) : 0.0);
    return model;
  }

  // Classification: gradient descent on standardized features.
  std::vector<double> mean(d, 0.0), scale(d, 1.0);
  for (std::size_t j = 0; j < d; ++j) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += x(i, j);
    mean[j] = total / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (x(i, j) - mean[j]) * (x(i, j) - mean[j]);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    scale[j] = sd > 0.0 ? sd : 1.0;
  }
  Matrix z(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) z(i, j) = (x(i, j) - mean[j]) / scale[j];
  }
  std::vector<double> w(d + 1, 0.0);
  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= static_cast<double>(n);
  if (y_mean > 0.0 && y_mean < 1.0) w[d] = std::log(y_mean / (1.0 - y_mean));

  std::vector<double> grad, trial(d + 1);
  double loss = logistic_objective(z, y, w, params.l2, &grad);
  double step = params.step;
  int epoch = 0;
  for (; epoch < params.max_epochs; ++epoch) {
    double grad_max = 0.0, grad_sq = 0.0;
    for (double g : grad) {
      grad_max = std::max(grad_max, std::abs(g));
      grad_sq += g * g;
    }
    if (grad_max < params.tolerance) break;
    // Backtracking line search (Armijo), trying a larger step first.
    step *= 2.0;
    double trial_loss = 0.0;
    for (int attempt = 0; attempt < 60; ++attempt) {
      for (std::size_t j = 0; j <= d; ++j) trial[j] = w[j] - step * grad[j];
      trial_loss = logistic_objective(z, y, trial, params.l2, nullptr);
      if (trial_loss <= loss - 0.5 * step * grad_sq) break;
      step *= 0.5;
    }
    if (!(trial_loss < loss)) break;
    w = trial;
    loss = logistic_objective(z, y, w, params.l2, &grad);
  }
  model.epochs_ = epoch;
  model.weights_.resize(d);
  double bias = w[d];
  for (std::size_t j = 0; j < d; ++j) {
    model.weights_[j] = w[j] / scale[j];
    bias -= model.weights_[j] * mean[j];
  }
  model.bias_ = bias;
  return model;
}

std::vector<double> LinearModel::predict(const Matrix& x) const {
  check(x.cols() == weights_.size(), ErrorCode::kDimensionMismatch,
        "linear model expects " + std::to_string(weights_.size()) + " features, got " +
            std::to_string(x.cols()));
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto row = x.row(i);
    double f = bias_;
    for (std::size_t j = 0; j < weights_.size(); ++j) f += weights_[j] * row[j];
    out[i] = task_ == Task::kClassification ? sigmoid(f) : f;
  }
  return out;
}

nlohmann::json LinearModel::to_json() const {
  return {{"task", std::string(to_string(task_))},
          {"weights", weights_},
          {"bias", bias_},
          {"l2", l2_}};
}

LinearModel LinearModel::from_json(const nlohmann::json& doc) {
  LinearModel model;
  model.task_ = parse_task(doc.at("task").get<std::string>());
  model.weights_ = doc.at("weights").get<std::vector<double>>();
  model.bias_ = doc.at("bias").get<double>();
  model.l2_ = doc.value("l2", 0.0);
  return model;
}

// ---------------------------------------------------------------------------
// Ordered target statistics

OrderedEncoder fit_ordered_encoder(const Cohort& train, std::span<const double> target,
                                   double prior_weight, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "ordered-encoder"));
  return fit_ordered_encoder_with_permutation(train, target, prior_weight,
                                              rng.permutation(train.size()));
}

OrderedEncoder fit_ordered_encoder_with_permutation(const Cohort& train,
                                                    std::span<const double> target,
                                                    double prior_weight,
                                                    std::vector<std::size_t> permutation) {
  const std::size_t n = train.size();
  check(target.size() == n, ErrorCode::kDimensionMismatch,
        "ordered encoder needs one target per row");
  check(prior_weight > 0.0, ErrorCode::kInvalidArgument, "prior weight must be positive");
  check(permutation.size() == n, ErrorCode::kDimensionMismatch,
        "permutation length differs from row count");
  {
    std::vector<bool> seen(n, false);
    for (std::size_t p : permutation) {
      check(p < n && !seen[p], ErrorCode::kInvalidArgument, "not a permutation of the rows");
      seen[p] = true;
    }
  }
  OrderedEncoder enc;
  enc.prior_weight_ = prior_weight;
  double total = 0.0;
  for (double t : target) total += t;
  enc.prior_ = n > 0 ? total / static_cast<double>(n) : 0.0;
  for (std::size_t c = 0; c < train.schema.columns.size(); ++c) {
    if (train.schema.columns[c].kind != FeatureKind::kCategorical) continue;
    enc.columns_.push_back(train.schema.columns[c].name);
    enc.sources_.push_back(c);
  }
  enc.training_ = Matrix(n, enc.columns_.size());
  for (std::size_t j = 0; j < enc.sources_.size(); ++j) {
    std::map<std::string, OrderedEncoder::Stat> stats;
    for (std::size_t r : permutation) {
      const Cell& cell = train.records[r].values[enc.sources_[j]];
      if (!cell.is_category()) {
        enc.training_(r, j) = enc.prior_;
        continue;
      }
      OrderedEncoder::Stat& stat = stats[cell.as_category()];
      enc.training_(r, j) = enc.encode(stat);
      stat.sum += target[r];
      stat.count += 1.0;
    }
    enc.stats_.emplace_back(stats.begin(), stats.end());
  }
  enc.permutation_ = std::move(permutation);
  return enc;
}

double OrderedEncoder::encode(const Stat& stat) const {
  return (stat.sum + prior_weight_ * prior_) / (stat.count + prior_weight_);
}

Matrix OrderedEncoder::apply(const Cohort& cohort) const {
  Matrix out(cohort.size(), columns_.size());
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    const auto& table = stats_[j];
    const std::size_t source = sources_[j];
    check(source < cohort.schema.columns.size() &&
              cohort.schema.columns[source].name == columns_[j],
          ErrorCode::kSchemaMismatch, "ordered encoder column '" + columns_[j] + "' not found");
    for (std::size_t r = 0; r < cohort.size(); ++r) {
      const Cell& cell = cohort.records[r].values[source];
      double value = prior_;
      if (cell.is_category()) {
        auto it = std::lower_bound(
            table.begin(), table.end(), cell.as_category(),
            [](const auto& entry, const std::string& key) { return entry.first < key; });
        if (it != table.end() && it->first == cell.as_category()) value = encode(it->second);
      }
      out(r, j) = value;
    }
  }
  return out;
}

nlohmann::json OrderedEncoder::to_json() const {
  nlohmann::json columns = nlohmann::json::array();
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    nlohmann::json table = nlohmann::json::array();
    for (const auto& [key, stat] : stats_[j]) table.push_back({key, stat.sum, stat.count});
    columns.push_back({{"name", columns_[j]}, {"source", sources_[j]}, {"stats", table}});
  }
  // Training encodings are not needed to apply the encoder and are dropped.
  return {{"prior", prior_}, {"prior_weight", prior_weight_}, {"columns", columns}};
}

OrderedEncoder OrderedEncoder::from_json(const nlohmann::json& doc) {
  OrderedEncoder enc;
  enc.prior_ = doc.at("prior").get<double>();
  enc.prior_weight_ = doc.at("prior_weight").get<double>();
  for (const auto& column : doc.at("columns")) {
    enc.columns_.push_back(column.at("name").get<std::string>());
    enc.sources_.push_back(column.at("source").get<std::size_t>());
    std::vector<std::pair<std::string, Stat>> table;
    for (const auto& entry : column.at("stats")) {
      table.emplace_back(entry.at(0).get<std::string>(),
                         Stat{entry.at(1).get<double>(), entry.at(2).get<double>()});
    }
    enc.stats_.push_back(std::move(table));
  }
  return enc;
}

}  // namespace progpipe
