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

#ifndef PROGPIPE_DATASET_H_
#define PROGPIPE_DATASET_H_

// Wound-level, episode-level and combined cohorts: schemas, CSV loading,
// joining, and patient-grouped splitting.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace progpipe {

enum class FeatureKind { kNumeric, kCategorical, kFlag };
enum class Granularity { kWound, kEpisode, kCombined };
enum class Target { kRecurrence, kCategory, kWeeks };

std::string_view to_string(FeatureKind kind);
std::string_view to_string(Granularity granularity);
std::string_view to_string(Target target);
FeatureKind parse_feature_kind(std::string_view text);
Granularity parse_granularity(std::string_view text);
Target parse_target(std::string_view text);

// Reserved CSV columns. Identity columns lead every file; label columns
// trail the feature columns in any order and may be absent.
inline constexpr std::string_view kPatientIdColumn = "PatientId";
inline constexpr std::string_view kEpisodeNumberColumn = "EpisodeNumber";
inline constexpr std::string_view kAdmissionDateColumn = "AdmissionDate";
inline constexpr std::string_view kRecurrenceColumn = "WoundRecurrence";
inline constexpr std::string_view kCategoryColumn = "PatientCategory";
inline constexpr std::string_view kWeeksColumn = "WeeksToReadmit";

std::string_view label_column(Target target);

struct Column {
  std::string name;
  FeatureKind kind = FeatureKind::kNumeric;

  bool operator==(const Column&) const = default;
};

// Rows whose admission date (ISO yyyy-mm-dd) is before `min_date` are
// dropped at load time.
struct DateFilter {
  std::string min_date = "2015-01-01";

  bool operator==(const DateFilter&) const = default;
};

struct Schema {
  std::vector<Column> columns;
  // Name of the label column this cohort is meant to predict.
  std::optional<std::string> target;
  Granularity granularity = Granularity::kWound;
  std::optional<DateFilter> date_filter = DateFilter{};
  // Accepted range of WeeksToReadmit labels; nullopt disables the check.
  std::optional<std::pair<double, double>> weeks_range;

  std::optional<std::size_t> index_of(std::string_view name) const;
  std::vector<std::string> names() const;
  // Throws kSpecInvalid on duplicate names or an unknown target.
  void validate() const;

  bool operator==(const Schema&) const = default;
};

nlohmann::json schema_to_json(const Schema& schema);
Schema schema_from_json(const nlohmann::json& doc);
Schema load_schema(const std::string& path);
void save_schema(const Schema& schema, const std::string& path);

// One cell of a record: MISSING, a number (numeric and flag columns), or a
// verbatim category string.
class Cell {
 public:
  Cell() = default;
  static Cell missing() { return Cell(); }
  static Cell number(double value) { return Cell(Storage(value)); }
  static Cell category(std::string value) {
    return Cell(Storage(std::move(value)));
  }

  bool is_missing() const { return std::holds_alternative<std::monostate>(value_); }
  bool is_number() const { return std::holds_alternative<double>(value_); }
  bool is_category() const { return std::holds_alternative<std::string>(value_); }
  double as_number() const { return std::get<double>(value_); }
  const std::string& as_category() const { return std::get<std::string>(value_); }

  bool operator==(const Cell&) const = default;

 private:
  using Storage = std::variant<std::monostate, double, std::string>;
  explicit Cell(Storage value) : value_(std::move(value)) {}
  Storage value_;
};

enum class Recurrence { kRecurringWound, kNewWound };
enum class Category { kReAdmitPatient, kNewPatient };

std::string_view to_string(Recurrence value);
std::string_view to_string(Category value);

struct PatientRecord {
  std::string patient_id;
  int episode_number = 1;
  std::optional<std::string> admission_date;
  std::vector<Cell> values;
  std::optional<Recurrence> label_recurrence;
  std::optional<Category> label_category;
  std::optional<double> label_weeks;

  bool operator==(const PatientRecord&) const = default;
};

struct Cohort {
  Schema schema;
  std::vector<PatientRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  // Throws kSchemaMismatch when a record does not conform.
  void validate() const;
};

// Positive-class indicator (ReAdmit / Recurring = 1) or weeks, per target.
// Records lacking the label yield nullopt.
std::optional<double> label_value(const PatientRecord& record, Target target);
bool has_label(const PatientRecord& record, Target target);

// Throws kSchemaMismatch naming missing and extra columns (or the first
// kind/order difference) when `actual` does not have `expected`'s columns.
void require_same_columns(const Schema& expected, const Schema& actual);

Cohort subset(const Cohort& cohort, std::span<const std::size_t> indices);
// Records carrying the given label.
Cohort labeled_subset(const Cohort& cohort, Target target);

Cohort read_cohort(std::istream& in, const Schema& schema);
Cohort load_cohort(const std::string& path, const Schema& schema);
void write_cohort(const Cohort& cohort, std::ostream& out);
void save_cohort(const Cohort& cohort, const std::string& path);

// Parses one CSV cell for a column kind. Unparseable numbers and empty
// strings become MISSING.
Cell parse_cell(std::string_view text, FeatureKind kind);
std::string format_cell(const Cell& cell);

// Inner join on (patient_id, episode_number). Wound columns first, then
// episode columns whose names the wound schema does not already carry.
Cohort join_wound_episode(const Cohort& wound, const Cohort& episode);

struct SplitPlan {
  double train_fraction = 0.70;
  double valid_fraction = 0.10;
  double test_fraction = 0.20;
  std::uint64_t seed = 0;
};

struct CohortSplit {
  Cohort train;
  Cohort valid;
  Cohort test;
};

// Index form of split(): which records land in each partition.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;
  std::vector<std::size_t> test;
};

SplitIndices split_indices(const Cohort& cohort, const SplitPlan& plan);
CohortSplit split(const Cohort& cohort, const SplitPlan& plan);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;
};

// Patient-grouped K-fold plan. Groups are dealt in shuffled order to the
// fold with the fewest records so far.
std::vector<Fold> kfold_plan(const Cohort& cohort, int k, std::uint64_t seed);

// Distinct patient ids in first-seen order, and each record's group index.
struct PatientGroups {
  std::vector<std::string> ids;
  std::vector<std::vector<std::size_t>> members;
};
PatientGroups group_by_patient(const Cohort& cohort);

}  // namespace progpipe

#endif  // PROGPIPE_DATASET_H_
