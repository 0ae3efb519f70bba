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

#include "progpipe/calibrate.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "progpipe/error.h"
#include "progpipe/models.h"

namespace progpipe {

std::string_view to_string(CalibratorType type) {
  switch (type) {
    case CalibratorType::kNone: return "none";
    case CalibratorType::kPlatt: return "platt";
    case CalibratorType::kIsotonic: return "isotonic";
  }
  return "none";
}

CalibratorType parse_calibrator(std::string_view text) {
  if (text == "none") return CalibratorType::kNone;
  if (text == "platt" || text == "sigmoid") return CalibratorType::kPlatt;
  if (text == "isotonic") return CalibratorType::kIsotonic;
  fail(ErrorCode::kSpecInvalid, "unknown calibrator '" + std::string(text) + "'");
}

Calibrator Calibrator::platt(double a, double b) {
  Calibrator c;
  c.type_ = CalibratorType::kPlatt;
  c.a_ = a;
  c.b_ = b;
  return c;
}

Calibrator Calibrator::isotonic(std::vector<double> breakpoints, std::vector<double> values) {
  check(!breakpoints.empty() && breakpoints.size() == values.size(),
        ErrorCode::kLengthMismatch, "isotonic calibrator needs one value per breakpoint");
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    check(breakpoints[i - 1] < breakpoints[i] && values[i - 1] <= values[i],
          ErrorCode::kSpecInvalid, "isotonic calibrator must be non-decreasing");
  }
  Calibrator c;
  c.type_ = CalibratorType::kIsotonic;
  c.breakpoints_ = std::move(breakpoints);
  c.values_ = std::move(values);
  return c;
}

double Calibrator::apply(double score) const {
  switch (type_) {
    case CalibratorType::kNone: return score;
    case CalibratorType::kPlatt: return sigmoid(a_ * score + b_);
    case CalibratorType::kIsotonic: {
      auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), score);
      if (it == breakpoints_.begin()) return values_.front();
      return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
    }
  }
  return score;
}

std::vector<double> Calibrator::apply(std::span<const double> scores) const {
  std::vector<double> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = apply(scores[i]);
  return out;
}

nlohmann::json Calibrator::to_json() const {
  nlohmann::json doc = {{"kind", std::string(to_string(type_))}};
  if (type_ == CalibratorType::kPlatt) {
    doc["a"] = a_;
    doc["b"] = b_;
  } else if (type_ == CalibratorType::kIsotonic) {
    doc["breakpoints"] = breakpoints_;
    doc["values"] = values_;
  }
  return doc;
}

Calibrator Calibrator::from_json(const nlohmann::json& doc) {
  switch (parse_calibrator(doc.at("kind").get<std::string>())) {
    case CalibratorType::kNone: return Calibrator();
    case CalibratorType::kPlatt:
      return platt(doc.at("a").get<double>(), doc.at("b").get<double>());
    case CalibratorType::kIsotonic:
      return isotonic(doc.at("breakpoints").get<std::vector<double>>(),
                      doc.at("values").get<std::vector<double>>());
  }
  return Calibrator();
}

namespace {

// Logistic regression of smoothed targets on the score, with a >= 0.
Calibrator fit_platt(std::span<const double> s, std::span<const double> y) {
  double positives = 0.0;
  for (double v : y) positives += v;
  const double negatives = static_cast<double>(y.size()) - positives;
  // Platt's smoothed targets keep the fit finite on separable scores.
  const double hi = (positives + 1.0) / (positives + 2.0);
  const double lo = 1.0 / (negatives + 2.0);
  std::vector<double> t(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) t[i] = y[i] > 0.5 ? hi : lo;

  auto objective = [&](double a, double b) {
    double total = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double f = a * s[i] + b;
      total += logistic_loss(f, 0.0) - t[i] * f;
    }
    return total;
  };
  double a = 0.0;
  const double mean_t = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(t.size());
  double b = std::log(mean_t / (1.0 - mean_t));
  double loss = objective(a, b);
  for (int iter = 0; iter < 100; ++iter) {
    double ga = 0.0, gb = 0.0, haa = 0.0, hab = 0.0, hbb = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double f = a * s[i] + b;
      const double r = sigmoid(f) - t[i];
      const double w = logistic_hessian(f);
      ga += r * s[i];
      gb += r;
      haa += w * s[i] * s[i];
      hab += w * s[i];
      hbb += w;
    }
    if (std::max(std::abs(ga), std::abs(gb)) < 1e-10) break;
    haa += 1e-12;
    hbb += 1e-12;
    const double det = haa * hbb - hab * hab;
    double da, db;
    if (det > 1e-300) {
      da = -(hbb * ga - hab * gb) / det;
      db = -(haa * gb - hab * ga) / det;
    } else {
      da = -ga;
      db = -gb;
    }
    double step = 1.0;
    double next = loss;
    for (int k = 0; k < 50; ++k) {
      next = objective(a + step * da, b + step * db);
      if (next < loss) break;
      step *= 0.5;
    }
    if (!(next < loss)) break;
    a += step * da;
    b += step * db;
    loss = next;
  }
  if (a < 0.0) {
    a = 0.0;
    b = std::log(mean_t / (1.0 - mean_t));
  }
  return Calibrator::platt(a, b);
}

// Pool-adjacent-violators on scores sorted ascending, tied scores pooled
// first.
Calibrator fit_isotonic(std::span<const double> s, std::span<const double> y) {
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return s[i] < s[j]; });
  struct Block {
    double start;
    double sum;
    double weight;
    double mean() const { return sum / weight; }
  };
  std::vector<Block> blocks;
  for (std::size_t i : order) {
    if (!blocks.empty() && blocks.back().start == s[i]) {
      blocks.back().sum += y[i];
      blocks.back().weight += 1.0;
    } else {
      blocks.push_back({s[i], y[i], 1.0});
    }
  }
  std::vector<Block> stack;
  for (const Block& block : blocks) {
    stack.push_back(block);
    while (stack.size() > 1 && stack[stack.size() - 2].mean() > stack.back().mean()) {
      Block top = stack.back();
      stack.pop_back();
      stack.back().sum += top.sum;
      stack.back().weight += top.weight;
    }
  }
  std::vector<double> breakpoints, values;
  for (const Block& block : stack) {
    const double value = block.mean();
    if (!values.empty() && values.back() == value) continue;
    breakpoints.push_back(block.start);
    values.push_back(value);
  }
  return Calibrator::isotonic(std::move(breakpoints), std::move(values));
}

}  // namespace

Calibrator fit_calibrator(CalibratorType type, std::span<const double> scores,
                          std::span<const double> labels) {
  check(scores.size() == labels.size(), ErrorCode::kLengthMismatch,
        "calibration scores and labels differ in length");
  if (type == CalibratorType::kNone) return Calibrator();
  bool has_zero = false, has_one = false;
  for (double v : labels) {
    has_zero |= v == 0.0;
    has_one |= v == 1.0;
  }
  check(has_zero && has_one, ErrorCode::kSingleClass,
        "calibration data needs both classes");
  for (double v : scores) {
    check(std::isfinite(v), ErrorCode::kNonFinite, "calibration score is not finite");
  }
  return type == CalibratorType::kPlatt ? fit_platt(scores, labels)
                                        : fit_isotonic(scores, labels);
}

}  // namespace progpipe
