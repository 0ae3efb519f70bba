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

#include <algorithm>
#include <cmath>
#include <set>

#include "progpipe/search.h"
#include "progpipe/synthgen.h"
#include "test_util.h"

namespace progpipe {
namespace {

using testing::make_record;
using testing::make_schema;
using testing::num;

const Cohort& small_episodes() {
  static const Cohort cohort = [] {
    CohortSpec spec = default_spec();
    spec.n_wound_rows = 1600;
    spec.n_episode_rows = 600;
    spec.seed = 5;
    return generate(spec).episode;
  }();
  return cohort;
}

LearnerSpec quick_trees(int n_trees) {
  LearnerSpec spec;
  spec.type = LearnerType::kGbdtLeafWise;
  spec.gbdt.n_trees = n_trees;
  spec.gbdt.max_leaves = 4;
  spec.gbdt.min_samples_leaf = 10;
  return spec;
}

ConfigSpace small_space() {
  ConfigSpace space;
  space.imputers = {ImputerKind{ImputerType::kMean}, ImputerKind{ImputerType::kMedian}};
  space.processors = {ProcessorKind{ProcessorType::kOneHotStandardize}};
  space.learners = {LearnerSpec{}, quick_trees(10)};
  space.calibrators = {CalibratorType::kNone, CalibratorType::kPlatt};
  space.k_folds = 3;
  return space;
}

SearchOptions options(Strategy strategy, std::size_t budget = 0, int threads = 1) {
  SearchOptions o;
  o.strategy = strategy;
  o.budget = budget;
  o.seed = 11;
  o.threads = threads;
  return o;
}

TEST(Search, ConstantPredictorCvOracle) {
  // Each patient has one positive and one negative episode, so every
  // patient-grouped training split has prevalence 1/2 and a tree model with
  // no trees predicts 0.5 (the positive class) everywhere. Macro-F1 is then
  // (2/3 + 0) / 2 on every fold.
  Cohort c;
  c.schema = make_schema({{"X", FeatureKind::kNumeric}});
  for (int p = 0; p < 40; ++p) {
    for (int e = 0; e < 2; ++e) {
      PatientRecord r = make_record("P" + std::to_string(p), e + 1, {num(p * 2 + e)});
      r.label_category = e == 0 ? Category::kReAdmitPatient : Category::kNewPatient;
      c.records.push_back(r);
    }
  }
  PipelineConfig config;
  config.learner = quick_trees(0);
  const CvScore cv = cv_score(config, Target::kCategory, c, 4, Metric::kMacroF1, 1);
  ASSERT_EQ(cv.folds.size(), 4u);
  for (double f : cv.folds) EXPECT_NEAR(f, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(cv.mean, 1.0 / 3.0, 1e-12);
}

TEST(Search, GridEnumeration) {
  const ConfigSpace space = small_space();
  EXPECT_EQ(space.grid_size(Task::kClassification), 8u);
  EXPECT_EQ(space.grid_size(Task::kRegression), 4u);
  const auto configs = space.configs(Task::kClassification);
  std::set<std::string> names;
  for (const auto& c : configs) names.insert(c.name());
  EXPECT_EQ(names.size(), 8u);
  for (const auto& c : space.configs(Task::kRegression)) {
    EXPECT_EQ(c.calibrator, CalibratorType::kNone);
  }
  EXPECT_EQ(default_space().grid_size(Task::kClassification), 16u);
}

TEST(Search, SpaceJsonExpandsLearnerLists) {
  const auto doc = nlohmann::json::parse(R"({
    "imputers": ["mean"], "processors": ["standardize"],
    "learners": [{"name": "gbdt-leafwise", "n_trees": [5, 10], "max_leaves": [3, 7]},
                 {"name": "linear"}],
    "calibrators": ["none"], "metric": "r2", "k_folds": 4})");
  const ConfigSpace space = space_from_json(doc);
  EXPECT_EQ(space.learners.size(), 5u);
  EXPECT_EQ(space.regression_metric, Metric::kR2);
  EXPECT_EQ(space.k_folds, 4);
  const ConfigSpace back = space_from_json(space_to_json(space));
  EXPECT_EQ(back.learners, space.learners);
  EXPECT_PROGPIPE_ERROR(
      space_from_json(nlohmann::json::parse(
          R"({"imputers": [], "processors": ["identity"], "learners": [{"name":"linear"}],
              "calibrators": ["none"]})")),
      ErrorCode::kEmptySpace);
}

TEST(Search, ShippedSpacesLoad) {
  const std::string dir = std::string(PROGPIPE_SOURCE_DIR) + "/configs/";
  const ConfigSpace shipped = load_space(dir + "default_space.json");
  const ConfigSpace builtin = default_space();
  EXPECT_EQ(shipped.configs(Task::kClassification), builtin.configs(Task::kClassification));
  EXPECT_EQ(load_space(dir + "small_space.json").grid_size(Task::kClassification), 4u);
  // 2 imputers x 1 processor x (2 + 81 + 1) learners x 2 calibrators.
  EXPECT_EQ(load_space(dir + "extended_space.json").grid_size(Task::kClassification), 336u);
}

TEST(Search, SingletonSpace) {
  ConfigSpace space = small_space();
  space.imputers.resize(1);
  space.learners = {LearnerSpec{}};
  space.calibrators = {CalibratorType::kNone};
  const SearchResult r =
      search(space, Target::kCategory, small_episodes(), options(Strategy::kExhaustive));
  ASSERT_EQ(r.leaderboard.size(), 1u);
  EXPECT_EQ(r.evaluations, 1u);
  EXPECT_EQ(r.grid_size, 1u);
  EXPECT_EQ(r.best.config(), space.configs(Task::kClassification)[0]);
}

TEST(Search, ExhaustiveLeaderboardIsSortedAndBestLeads) {
  const SearchResult r =
      search(small_space(), Target::kCategory, small_episodes(), options(Strategy::kExhaustive));
  ASSERT_EQ(r.leaderboard.size(), 8u);
  EXPECT_EQ(r.evaluations, 8u);
  EXPECT_EQ(r.best.config(), r.leaderboard[0].config);
  for (std::size_t i = 1; i < r.leaderboard.size(); ++i) {
    EXPECT_GE(r.leaderboard[i - 1].mean, r.leaderboard[i].mean);
  }
  for (const auto& e : r.leaderboard) {
    EXPECT_FALSE(e.failed);
    ASSERT_EQ(e.fold_scores.size(), 3u);
    double mean = 0.0;
    for (double f : e.fold_scores) mean += f / 3.0;
    EXPECT_NEAR(e.mean, mean, 1e-12);
  }
}

TEST(Search, RandomWithFullBudgetMatchesExhaustive) {
  const SearchResult ex =
      search(small_space(), Target::kCategory, small_episodes(), options(Strategy::kExhaustive));
  const SearchResult rnd = search(small_space(), Target::kCategory, small_episodes(),
                                  options(Strategy::kRandom, 8));
  ASSERT_EQ(rnd.leaderboard.size(), ex.leaderboard.size());
  for (std::size_t i = 0; i < ex.leaderboard.size(); ++i) {
    EXPECT_EQ(rnd.leaderboard[i].config, ex.leaderboard[i].config);
    EXPECT_EQ(rnd.leaderboard[i].mean, ex.leaderboard[i].mean);
  }
}

TEST(Search, BudgetAccounting) {
  const SearchResult r = search(small_space(), Target::kCategory, small_episodes(),
                                options(Strategy::kRandom, 3));
  EXPECT_EQ(r.evaluations, 3u);
  EXPECT_EQ(r.leaderboard.size(), 3u);
  const SearchResult clamped = search(small_space(), Target::kCategory, small_episodes(),
                                      options(Strategy::kRandom, 100));
  EXPECT_EQ(clamped.evaluations, 8u);
  SearchOptions strict = options(Strategy::kRandom, 100);
  strict.strict_budget = true;
  EXPECT_PROGPIPE_ERROR(search(small_space(), Target::kCategory, small_episodes(), strict),
                        ErrorCode::kBudgetExceedsGrid);
}

TEST(Search, HalvingNarrowsCandidates) {
  const SearchResult r = search(small_space(), Target::kCategory, small_episodes(),
                                options(Strategy::kHalving, 8));
  EXPECT_GE(r.evaluations, 8u);
  EXPECT_LT(r.leaderboard.size(), 8u);
  EXPECT_GE(r.leaderboard.size(), 1u);
  EXPECT_EQ(r.best.config(), r.leaderboard[0].config);
}

TEST(Search, DeterministicAcrossRunsAndThreadCounts) {
  const SearchResult a = search(small_space(), Target::kCategory, small_episodes(),
                                options(Strategy::kRandom, 5, 1));
  const SearchResult b = search(small_space(), Target::kCategory, small_episodes(),
                                options(Strategy::kRandom, 5, 3));
  EXPECT_EQ(leaderboard_to_json(a.leaderboard), leaderboard_to_json(b.leaderboard));
  EXPECT_EQ(a.best.to_json(a.metric), b.best.to_json(b.metric));
}

TEST(Search, RegressionUsesRegressionMetric) {
  ConfigSpace space = small_space();
  space.imputers.resize(1);
  const Cohort weeks = labeled_subset(small_episodes(), Target::kWeeks);
  const SearchResult r = search(space, Target::kWeeks, weeks, options(Strategy::kExhaustive));
  EXPECT_EQ(r.metric, Metric::kNegMae);
  EXPECT_EQ(r.grid_size, 2u);
  for (const auto& e : r.leaderboard) EXPECT_LE(e.mean, 0.0);
}

TEST(Search, HoldoutSplitKeepsPatientsTogether) {
  const Cohort& c = small_episodes();
  const Holdout h = holdout_split(c, 0.8, 3);
  EXPECT_EQ(h.first.size() + h.second.size(), c.size());
  std::set<std::string> a;
  for (auto i : h.first) a.insert(c.records[i].patient_id);
  for (auto i : h.second) EXPECT_FALSE(a.count(c.records[i].patient_id));
  EXPECT_NEAR(h.first.size() / static_cast<double>(c.size()), 0.8, 0.05);
}

}  // namespace
}  // namespace progpipe
