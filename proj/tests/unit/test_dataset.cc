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

#include <set>
#include <sstream>

#include "progpipe/dataset.h"
#include "test_util.h"

namespace progpipe {
namespace {

using testing::cat;
using testing::make_record;
using testing::make_schema;
using testing::na;
using testing::num;

Schema tiny_schema() {
  return make_schema({{"Age", FeatureKind::kNumeric},
                      {"Type", FeatureKind::kCategorical},
                      {"Smoker", FeatureKind::kFlag}});
}

TEST(Dataset, EnumNamesRoundTrip) {
  for (auto g : {Granularity::kWound, Granularity::kEpisode, Granularity::kCombined}) {
    EXPECT_EQ(parse_granularity(to_string(g)), g);
  }
  for (auto t : {Target::kRecurrence, Target::kCategory, Target::kWeeks}) {
    EXPECT_EQ(parse_target(to_string(t)), t);
  }
  EXPECT_EQ(parse_feature_kind("boolean-flag"), FeatureKind::kFlag);
  EXPECT_PROGPIPE_ERROR(parse_granularity("ward"), ErrorCode::kSpecInvalid);
}

TEST(Dataset, SchemaRejectsDuplicatesAndReservedNames) {
  EXPECT_PROGPIPE_ERROR(
      make_schema({{"A", FeatureKind::kNumeric}, {"A", FeatureKind::kFlag}}).validate(),
      ErrorCode::kSpecInvalid);
  EXPECT_PROGPIPE_ERROR(make_schema({{"PatientId", FeatureKind::kNumeric}}).validate(),
                        ErrorCode::kSpecInvalid);
  Schema s = tiny_schema();
  s.target = "Age";
  EXPECT_PROGPIPE_ERROR(s.validate(), ErrorCode::kSpecInvalid);
}

TEST(Dataset, SchemaJsonRoundTrip) {
  Schema s = tiny_schema();
  s.target = "PatientCategory";
  s.granularity = Granularity::kEpisode;
  s.date_filter = DateFilter{"2016-03-01"};
  s.weeks_range = std::make_pair(1.0, 15.0);
  EXPECT_EQ(schema_from_json(schema_to_json(s)), s);
  s.date_filter.reset();
  s.weeks_range.reset();
  EXPECT_EQ(schema_from_json(schema_to_json(s)), s);
}

TEST(Dataset, ReadsCellsAndLabels) {
  std::istringstream in(
      "PatientId,EpisodeNumber,AdmissionDate,Age,Type,Smoker,PatientCategory,WeeksToReadmit\n"
      "P1,1,2016-01-01,70,Venous,true,ReAdmitPatient,3\n"
      "P2,2,2017-05-05,,\"Pressure, heel\",0,NewPatient,\n"
      "P3,1,2018-01-01,abc,,FALSE,,\n");
  Schema schema = tiny_schema();
  const Cohort c = read_cohort(in, schema);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.records[0].values[0], num(70));
  EXPECT_EQ(c.records[0].values[1], cat("Venous"));
  EXPECT_EQ(c.records[0].values[2], num(1));
  EXPECT_EQ(c.records[0].label_category, Category::kReAdmitPatient);
  EXPECT_EQ(c.records[0].label_weeks, 3.0);
  EXPECT_TRUE(c.records[1].values[0].is_missing());
  EXPECT_EQ(c.records[1].values[1], cat("Pressure, heel"));
  EXPECT_EQ(c.records[1].episode_number, 2);
  EXPECT_FALSE(c.records[1].label_weeks.has_value());
  EXPECT_TRUE(c.records[2].values[0].is_missing());
  EXPECT_TRUE(c.records[2].values[1].is_missing());
  EXPECT_EQ(c.records[2].values[2], num(0));
  EXPECT_FALSE(c.records[2].label_category.has_value());
}

TEST(Dataset, DateFilterDropsEarlyAdmissions) {
  std::istringstream in(
      "PatientId,EpisodeNumber,AdmissionDate,Age,Type,Smoker\n"
      "P1,1,2014-12-31,70,A,1\n"
      "P2,1,2015-01-01,71,A,1\n");
  Schema schema = tiny_schema();
  schema.date_filter = DateFilter{};
  const Cohort c = read_cohort(in, schema);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.records[0].patient_id, "P2");
}

TEST(Dataset, HeaderAndArityErrors) {
  {
    std::istringstream in("PatientId,EpisodeNumber,Type,Age,Smoker\n");
    EXPECT_PROGPIPE_ERROR(read_cohort(in, tiny_schema()), ErrorCode::kHeaderMismatch);
  }
  {
    std::istringstream in("PatientId,EpisodeNumber,Age,Type,Smoker\nP1,1,3,A\n");
    try {
      read_cohort(in, tiny_schema());
      FAIL() << "expected RowArity";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kRowArity);
      EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
  }
}

TEST(Dataset, WeeksRangeEnforced) {
  std::istringstream in("PatientId,EpisodeNumber,Age,Type,Smoker,WeeksToReadmit\nP1,1,3,A,1,20\n");
  Schema schema = tiny_schema();
  schema.weeks_range = std::make_pair(1.0, 15.0);
  EXPECT_PROGPIPE_ERROR(read_cohort(in, schema), ErrorCode::kSchemaMismatch);
}

TEST(Dataset, WriteReadRoundTrip) {
  Cohort c;
  c.schema = tiny_schema();
  c.records.push_back(make_record("P1", 1, {num(1.5), cat("a b"), num(1)}));
  c.records.push_back(make_record("P2", 3, {na(), cat("x,y"), num(0)}));
  c.records[0].label_category = Category::kNewPatient;
  c.records[1].label_weeks = 4.0;
  c.records[1].admission_date = "2019-02-03";
  std::ostringstream out;
  write_cohort(c, out);
  std::istringstream in(out.str());
  const Cohort back = read_cohort(in, c.schema);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back.records[0], c.records[0]);
  EXPECT_EQ(back.records[1], c.records[1]);
}

TEST(Dataset, RequireSameColumnsNamesTheDifference) {
  Schema a = tiny_schema();
  Schema b = make_schema({{"Age", FeatureKind::kNumeric}, {"Extra", FeatureKind::kNumeric}});
  try {
    require_same_columns(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaMismatch);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("Type"), std::string::npos);
    EXPECT_NE(msg.find("Smoker"), std::string::npos);
    EXPECT_NE(msg.find("Extra"), std::string::npos);
  }
  EXPECT_NO_THROW(require_same_columns(a, tiny_schema()));
}

TEST(Dataset, JoinIsManyToManyOnPatientAndEpisode) {
  Cohort wound;
  wound.schema = make_schema({{"Shared", FeatureKind::kNumeric}, {"W", FeatureKind::kNumeric}});
  wound.records = {make_record("P1", 1, {num(1), num(10)}), make_record("P1", 1, {num(2), num(11)}),
                   make_record("P1", 2, {num(3), num(12)}), make_record("P9", 1, {num(4), num(13)})};
  Cohort episode;
  episode.schema = make_schema({{"Shared", FeatureKind::kNumeric}, {"E", FeatureKind::kNumeric}});
  episode.records = {make_record("P1", 1, {num(100), num(7)}),
                     make_record("P1", 2, {num(200), num(8)})};
  episode.records[0].label_category = Category::kReAdmitPatient;
  episode.records[1].label_category = Category::kNewPatient;

  const Cohort joined = join_wound_episode(wound, episode);
  ASSERT_EQ(joined.schema.columns.size(), 3u);
  EXPECT_EQ(joined.schema.columns[2].name, "E");
  EXPECT_EQ(joined.schema.granularity, Granularity::kCombined);
  ASSERT_EQ(joined.size(), 3u);
  EXPECT_EQ(joined.records[0].values, (std::vector<Cell>{num(1), num(10), num(7)}));
  EXPECT_EQ(joined.records[1].values, (std::vector<Cell>{num(2), num(11), num(7)}));
  EXPECT_EQ(joined.records[2].values, (std::vector<Cell>{num(3), num(12), num(8)}));
  EXPECT_EQ(joined.records[0].label_category, Category::kReAdmitPatient);
  EXPECT_EQ(joined.records[2].label_category, Category::kNewPatient);

  wound.records[0].label_category = Category::kNewPatient;
  EXPECT_PROGPIPE_ERROR(join_wound_episode(wound, episode), ErrorCode::kLabelConflict);

  episode.records = {make_record("P5", 1, {num(1), num(1)})};
  EXPECT_PROGPIPE_ERROR(join_wound_episode(wound, episode), ErrorCode::kEmptyJoin);
}

Cohort grouped_cohort(int patients, int per_patient) {
  Cohort c;
  c.schema = make_schema({{"X", FeatureKind::kNumeric}});
  for (int p = 0; p < patients; ++p) {
    for (int e = 0; e < per_patient + (p % 3); ++e) {
      c.records.push_back(make_record("P" + std::to_string(p), e + 1, {num(p)}));
    }
  }
  return c;
}

std::set<std::string> patients_of(const Cohort& c, const std::vector<std::size_t>& idx) {
  std::set<std::string> out;
  for (auto i : idx) out.insert(c.records[i].patient_id);
  return out;
}

TEST(Dataset, SplitIsPatientGroupedAndComplete) {
  const Cohort c = grouped_cohort(200, 2);
  SplitPlan plan;
  plan.seed = 4;
  const SplitIndices s = split_indices(c, plan);
  EXPECT_EQ(s.train.size() + s.valid.size() + s.test.size(), c.size());
  const auto a = patients_of(c, s.train), b = patients_of(c, s.valid), t = patients_of(c, s.test);
  for (const auto& p : a) {
    EXPECT_FALSE(b.count(p));
    EXPECT_FALSE(t.count(p));
  }
  for (const auto& p : b) EXPECT_FALSE(t.count(p));
  const double n = static_cast<double>(c.size());
  EXPECT_NEAR(s.train.size() / n, 0.70, 0.03);
  EXPECT_NEAR(s.valid.size() / n, 0.10, 0.03);
  EXPECT_NEAR(s.test.size() / n, 0.20, 0.03);
  const SplitIndices again = split_indices(c, plan);
  EXPECT_EQ(again.train, s.train);
  EXPECT_EQ(again.test, s.test);
}

TEST(Dataset, SplitNeedsThreePatients) {
  EXPECT_PROGPIPE_ERROR(split_indices(grouped_cohort(2, 5), SplitPlan{}),
                        ErrorCode::kTooFewPatients);
  const SplitIndices s = split_indices(grouped_cohort(3, 5), SplitPlan{});
  EXPECT_FALSE(s.train.empty());
  EXPECT_FALSE(s.valid.empty());
  EXPECT_FALSE(s.test.empty());
}

TEST(Dataset, KFoldCoversEveryRowOnceAndKeepsPatientsTogether) {
  const Cohort c = grouped_cohort(50, 1);
  const auto folds = kfold_plan(c, 5, 11);
  ASSERT_EQ(folds.size(), 5u);
  std::vector<int> seen(c.size(), 0);
  for (const auto& f : folds) {
    EXPECT_EQ(f.train.size() + f.valid.size(), c.size());
    for (auto i : f.valid) ++seen[i];
    const auto tp = patients_of(c, f.train);
    for (const auto& p : patients_of(c, f.valid)) EXPECT_FALSE(tp.count(p));
  }
  for (int s : seen) EXPECT_EQ(s, 1);
  EXPECT_PROGPIPE_ERROR(kfold_plan(c, 1, 0), ErrorCode::kInvalidArgument);
  EXPECT_PROGPIPE_ERROR(kfold_plan(grouped_cohort(3, 1), 5, 0), ErrorCode::kTooFewPatients);
}

TEST(Dataset, LabelValues) {
  PatientRecord r;
  r.label_category = Category::kReAdmitPatient;
  r.label_recurrence = Recurrence::kNewWound;
  EXPECT_EQ(label_value(r, Target::kCategory), 1.0);
  EXPECT_EQ(label_value(r, Target::kRecurrence), 0.0);
  EXPECT_FALSE(label_value(r, Target::kWeeks).has_value());
}

}  // namespace
}  // namespace progpipe
