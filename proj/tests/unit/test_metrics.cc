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

#include <gtest/gtest.h>

#include "progpipe/metrics.h"
#include "progpipe/random.h"
#include "test_util.h"

namespace progpipe {
namespace {

TEST(Metrics, ClassReportHandOracle) {
  const std::vector<int> pred{1, 1, 0, 0}, truth{1, 0, 0, 0};
  const ClassReport r = class_report(pred, truth);
  EXPECT_DOUBLE_EQ(r.per_class[1].precision, 0.5);
  EXPECT_DOUBLE_EQ(r.per_class[1].recall, 1.0);
  EXPECT_NEAR(r.per_class[1].f1, 2.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(r.per_class[0].precision, 1.0);
  EXPECT_NEAR(r.per_class[0].recall, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.per_class[0].f1, 0.8, 1e-15);
  EXPECT_NEAR(r.macro_f1, (2.0 / 3.0 + 0.8) / 2.0, 1e-15);
  EXPECT_EQ(r.per_class[0].support, 3u);
  EXPECT_EQ(r.per_class[1].support, 1u);
  EXPECT_EQ(r.confusion[0][1], 1u);
  EXPECT_EQ(r.confusion[1][1], 1u);
  EXPECT_EQ(r.confusion[0][0], 2u);
  EXPECT_EQ(r.n, 4u);
}

TEST(Metrics, MacroF1IsSymmetricInClassNames) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> p(30), t(30), pf(30), tf(30);
    for (int i = 0; i < 30; ++i) {
      p[i] = rng.bernoulli(0.4);
      t[i] = rng.bernoulli(0.6);
      pf[i] = 1 - p[i];
      tf[i] = 1 - t[i];
    }
    EXPECT_NEAR(class_report(p, t).macro_f1, class_report(pf, tf).macro_f1, 1e-15);
  }
}

TEST(Metrics, PerfectPredictionScoresOne) {
  const std::vector<int> y{0, 1, 1, 0, 1};
  EXPECT_DOUBLE_EQ(class_report(y, y).macro_f1, 1.0);
}

TEST(Metrics, RegressionHandOracle) {
  const std::vector<double> pred{1, 2, 3}, truth{1, 2, 4};
  const RegReport r = reg_report(pred, truth);
  EXPECT_NEAR(r.mae, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.r2, 1.0 - 9.0 / 42.0, 1e-12);
  const RegReport perfect = reg_report(truth, truth);
  EXPECT_EQ(perfect.mae, 0.0);
  EXPECT_EQ(perfect.r2, 1.0);
}

TEST(Metrics, ConstantTruth) {
  const std::vector<double> c{2, 2, 2};
  EXPECT_EQ(reg_report(c, c).r2, 0.0);
  EXPECT_PROGPIPE_ERROR(reg_report(std::vector<double>{1, 2, 3}, c), ErrorCode::kConstantTruth);
}

TEST(Metrics, InputErrors) {
  EXPECT_PROGPIPE_ERROR(class_report(std::vector<int>{1}, std::vector<int>{1, 0}),
                        ErrorCode::kLengthMismatch);
  EXPECT_PROGPIPE_ERROR(class_report(std::vector<int>{}, std::vector<int>{}),
                        ErrorCode::kLengthMismatch);
  EXPECT_PROGPIPE_ERROR(class_report(std::vector<int>{2}, std::vector<int>{1}),
                        ErrorCode::kInvalidArgument);
}

TEST(Metrics, ScoreAndThreshold) {
  const std::vector<double> prob{0.5, 0.49, 0.9, 0.1};
  EXPECT_EQ(threshold_labels(prob), (std::vector<int>{1, 0, 1, 0}));
  const std::vector<double> truth{1, 0, 1, 0};
  EXPECT_DOUBLE_EQ(score(Metric::kMacroF1, prob, truth), 1.0);
  const std::vector<double> w{3, 5}, wt{4, 5};
  EXPECT_DOUBLE_EQ(score(Metric::kNegMae, w, wt), -0.5);
  for (auto m : {Metric::kMacroF1, Metric::kNegMae, Metric::kR2}) {
    EXPECT_EQ(parse_metric(to_string(m)), m);
  }
  EXPECT_TRUE(metric_is_classification(Metric::kMacroF1));
  EXPECT_FALSE(metric_is_classification(Metric::kR2));
}

}  // namespace
}  // namespace progpipe
