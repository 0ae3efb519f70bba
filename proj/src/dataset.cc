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

#include "progpipe/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "progpipe/csv.h"
#include "progpipe/error.h"
#include "progpipe/random.h"

namespace progpipe {

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kNumeric: return "numeric";
    case FeatureKind::kCategorical: return "categorical";
    case FeatureKind::kFlag: return "boolean-flag";
  }
  return "numeric";
}

std::string_view to_string(Granularity granularity) {
  switch (granularity) {
    case Granularity::kWound: return "wound";
    case Granularity::kEpisode: return "episode";
    case Granularity::kCombined: return "combined";
  }
  return "wound";
}

std::string_view to_string(Target target) {
  switch (target) {
    case Target::kRecurrence: return "recurrence";
    case Target::kCategory: return "category";
    case Target::kWeeks: return "weeks";
  }
  return "category";
}

FeatureKind parse_feature_kind(std::string_view text) {
  if (text == "numeric") return FeatureKind::kNumeric;
  if (text == "categorical") return FeatureKind::kCategorical;
  if (text == "boolean-flag" || text == "flag") return FeatureKind::kFlag;
  fail(ErrorCode::kSpecInvalid, "unknown feature kind '" + std::string(text) + "'");
}

Granularity parse_granularity(std::string_view text) {
  if (text == "wound") return Granularity::kWound;
  if (text == "episode") return Granularity::kEpisode;
  if (text == "combined") return Granularity::kCombined;
  fail(ErrorCode::kSpecInvalid, "unknown granularity '" + std::string(text) + "'");
}

Target parse_target(std::string_view text) {
  if (text == "recurrence") return Target::kRecurrence;
  if (text == "category") return Target::kCategory;
  if (text == "weeks") return Target::kWeeks;
  fail(ErrorCode::kSpecInvalid, "unknown task '" + std::string(text) + "'");
}

std::string_view label_column(Target target) {
  switch (target) {
    case Target::kRecurrence: return kRecurrenceColumn;
    case Target::kCategory: return kCategoryColumn;
    case Target::kWeeks: return kWeeksColumn;
  }
  return kCategoryColumn;
}

std::string_view to_string(Recurrence value) {
  return value == Recurrence::kRecurringWound ? "RecurringWound" : "NewWound";
}

std::string_view to_string(Category value) {
  return value == Category::kReAdmitPatient ? "ReAdmitPatient" : "NewPatient";
}

namespace {

bool is_label_column(std::string_view name) {
  return name == kRecurrenceColumn || name == kCategoryColumn ||
         name == kWeeksColumn;
}

}  // namespace

std::optional<std::size_t> Schema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::string> Schema::names() const {
  std::vector<std::string> out;
  out.reserve(columns.size());
  for (const auto& c : columns) out.push_back(c.name);
  return out;
}

void Schema::validate() const {
  std::set<std::string_view> seen;
  for (const auto& c : columns) {
    check(!c.name.empty(), ErrorCode::kSpecInvalid, "empty column name");
    check(seen.insert(c.name).second, ErrorCode::kSpecInvalid,
          "duplicate column '" + c.name + "'");
    check(c.name != kPatientIdColumn && c.name != kEpisodeNumberColumn &&
              c.name != kAdmissionDateColumn && !is_label_column(c.name),
          ErrorCode::kSpecInvalid, "column '" + c.name + "' is reserved");
  }
  if (target) {
    check(is_label_column(*target), ErrorCode::kSpecInvalid,
          "target '" + *target + "' is not a label column");
  }
  if (weeks_range) {
    check(weeks_range->first <= weeks_range->second, ErrorCode::kSpecInvalid,
          "weeks_range is inverted");
  }
}

nlohmann::json schema_to_json(const Schema& schema) {
  nlohmann::json doc;
  doc["granularity"] = std::string(to_string(schema.granularity));
  doc["target"] = schema.target ? nlohmann::json(*schema.target) : nlohmann::json();
  nlohmann::json columns = nlohmann::json::array();
  for (const auto& c : schema.columns) {
    columns.push_back({{"name", c.name}, {"kind", std::string(to_string(c.kind))}});
  }
  doc["columns"] = std::move(columns);
  if (schema.date_filter) {
    doc["date_filter"] = {{"min_date", schema.date_filter->min_date}};
  } else {
    doc["date_filter"] = nullptr;
  }
  if (schema.weeks_range) {
    doc["weeks_range"] = {schema.weeks_range->first, schema.weeks_range->second};
  } else {
    doc["weeks_range"] = nullptr;
  }
  return doc;
}

Schema schema_from_json(const nlohmann::json& doc) {
  Schema schema;
  try {
    for (const auto& c : doc.at("columns")) {
      schema.columns.push_back(
          {c.at("name").get<std::string>(),
           parse_feature_kind(c.value("kind", std::string("numeric")))});
    }
    if (doc.contains("target") && !doc["target"].is_null()) {
      schema.target = doc["target"].get<std::string>();
    }
    schema.granularity =
        parse_granularity(doc.value("granularity", std::string("wound")));
    if (doc.contains("date_filter")) {
      if (doc["date_filter"].is_null()) {
        schema.date_filter.reset();
      } else {
        schema.date_filter = DateFilter{
            doc["date_filter"].value("min_date", std::string("2015-01-01"))};
      }
    }
    if (doc.contains("weeks_range") && !doc["weeks_range"].is_null()) {
      schema.weeks_range = std::make_pair(doc["weeks_range"].at(0).get<double>(),
                                          doc["weeks_range"].at(1).get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kSpecInvalid, std::string("schema json: ") + e.what());
  }
  schema.validate();
  return schema;
}

Schema load_schema(const std::string& path) {
  std::ifstream in(path);
  check(static_cast<bool>(in), ErrorCode::kIo, "cannot open schema " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kSpecInvalid, path + ": " + e.what());
  }
  return schema_from_json(doc);
}

void save_schema(const Schema& schema, const std::string& path) {
  std::ofstream out(path);
  check(static_cast<bool>(out), ErrorCode::kIo, "cannot write " + path);
  out << schema_to_json(schema).dump(2) << "\n";
}

void Cohort::validate() const {
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    check(rec.values.size() == schema.columns.size(), ErrorCode::kSchemaMismatch,
          "record " + std::to_string(r) + " has " +
              std::to_string(rec.values.size()) + " values, schema has " +
              std::to_string(schema.columns.size()));
    for (std::size_t c = 0; c < rec.values.size(); ++c) {
      const Cell& cell = rec.values[c];
      if (cell.is_missing()) continue;
      const bool categorical = schema.columns[c].kind == FeatureKind::kCategorical;
      check(categorical ? cell.is_category() : cell.is_number(),
            ErrorCode::kSchemaMismatch,
            "record " + std::to_string(r) + " column '" +
                schema.columns[c].name + "' has the wrong cell type");
    }
  }
}

std::optional<double> label_value(const PatientRecord& record, Target target) {
  switch (target) {
    case Target::kRecurrence:
      if (!record.label_recurrence) return std::nullopt;
      return *record.label_recurrence == Recurrence::kRecurringWound ? 1.0 : 0.0;
    case Target::kCategory:
      if (!record.label_category) return std::nullopt;
      return *record.label_category == Category::kReAdmitPatient ? 1.0 : 0.0;
    case Target::kWeeks:
      return record.label_weeks;
  }
  return std::nullopt;
}

bool has_label(const PatientRecord& record, Target target) {
  return label_value(record, target).has_value();
}

void require_same_columns(const Schema& expected, const Schema& actual) {
  if (expected.columns == actual.columns) return;
  std::vector<std::string> missing, extra;
  for (const auto& c : expected.columns) {
    if (!actual.index_of(c.name)) missing.push_back(c.name);
  }
  for (const auto& c : actual.columns) {
    if (!expected.index_of(c.name)) extra.push_back(c.name);
  }
  auto list = [](const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
    return out;
  };
  std::string message;
  if (!missing.empty()) message += "missing columns [" + list(missing) + "]";
  if (!extra.empty()) {
    message += (message.empty() ? "" : "; ") + std::string("extra columns [") +
               list(extra) + "]";
  }
  if (message.empty()) message = "column order or kinds differ";
  fail(ErrorCode::kSchemaMismatch, message);
}

Cohort subset(const Cohort& cohort, std::span<const std::size_t> indices) {
  Cohort out;
  out.schema = cohort.schema;
  out.records.reserve(indices.size());
  for (std::size_t i : indices) out.records.push_back(cohort.records.at(i));
  return out;
}

Cohort labeled_subset(const Cohort& cohort, Target target) {
  Cohort out;
  out.schema = cohort.schema;
  for (const auto& rec : cohort.records) {
    if (has_label(rec, target)) out.records.push_back(rec);
  }
  return out;
}

Cell parse_cell(std::string_view text, FeatureKind kind) {
  if (text.empty()) return Cell::missing();
  if (kind == FeatureKind::kCategorical) return Cell::category(std::string(text));
  if (kind == FeatureKind::kFlag) {
    if (text == "true" || text == "True" || text == "TRUE") return Cell::number(1.0);
    if (text == "false" || text == "False" || text == "FALSE") return Cell::number(0.0);
  }
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    return Cell::missing();
  }
  return Cell::number(value);
}

std::string format_cell(const Cell& cell) {
  if (cell.is_missing()) return "";
  if (cell.is_category()) return cell.as_category();
  return csv::format_double(cell.as_number());
}

namespace {

struct HeaderLayout {
  bool has_date = false;
  std::size_t first_feature = 2;
  // Position of each label column in the row, if present.
  std::optional<std::size_t> recurrence, category, weeks;
  std::size_t arity = 0;
};

HeaderLayout parse_header(const std::vector<std::string>& header,
                          const Schema& schema) {
  HeaderLayout layout;
  layout.arity = header.size();
  auto mismatch = [&](const std::string& why) {
    fail(ErrorCode::kHeaderMismatch, why);
  };
  if (header.size() < 2 || header[0] != kPatientIdColumn ||
      header[1] != kEpisodeNumberColumn) {
    mismatch("header must start with PatientId,EpisodeNumber");
  }
  if (header.size() > 2 && header[2] == kAdmissionDateColumn) {
    layout.has_date = true;
    layout.first_feature = 3;
  }
  const std::size_t n = schema.columns.size();
  if (header.size() < layout.first_feature + n) {
    mismatch("header has " + std::to_string(header.size()) +
             " columns, schema needs " + std::to_string(layout.first_feature + n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& got = header[layout.first_feature + i];
    if (got != schema.columns[i].name) {
      mismatch("column " + std::to_string(layout.first_feature + i) + " is '" +
               got + "', schema expects '" + schema.columns[i].name + "'");
    }
  }
  for (std::size_t i = layout.first_feature + n; i < header.size(); ++i) {
    const std::string& name = header[i];
    std::optional<std::size_t>* slot = nullptr;
    if (name == kRecurrenceColumn) slot = &layout.recurrence;
    else if (name == kCategoryColumn) slot = &layout.category;
    else if (name == kWeeksColumn) slot = &layout.weeks;
    if (slot == nullptr || slot->has_value()) {
      mismatch("unexpected trailing column '" + name + "'");
    }
    *slot = i;
  }
  return layout;
}

}  // namespace

Cohort read_cohort(std::istream& in, const Schema& schema) {
  schema.validate();
  Cohort cohort;
  cohort.schema = schema;
  std::string line;
  check(csv::read_line(in, line), ErrorCode::kHeaderMismatch, "missing header row");
  const HeaderLayout layout = parse_header(csv::split_line(line), schema);
  std::size_t line_number = 1;
  while (csv::read_line(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string> fields = csv::split_line(line);
    check(fields.size() == layout.arity, ErrorCode::kRowArity,
          "line " + std::to_string(line_number) + " has " +
              std::to_string(fields.size()) + " cells, expected " +
              std::to_string(layout.arity));
    PatientRecord rec;
    rec.patient_id = fields[0];
    {
      int episode = 0;
      auto [ptr, ec] = std::from_chars(fields[1].data(),
                                       fields[1].data() + fields[1].size(), episode);
      check(ec == std::errc() && ptr == fields[1].data() + fields[1].size() &&
                episode >= 1,
            ErrorCode::kSchemaMismatch,
            "line " + std::to_string(line_number) + ": bad EpisodeNumber '" +
                fields[1] + "'");
      rec.episode_number = episode;
    }
    if (layout.has_date && !fields[2].empty()) rec.admission_date = fields[2];
    if (schema.date_filter && rec.admission_date &&
        *rec.admission_date < schema.date_filter->min_date) {
      continue;
    }
    rec.values.reserve(schema.columns.size());
    for (std::size_t i = 0; i < schema.columns.size(); ++i) {
      rec.values.push_back(
          parse_cell(fields[layout.first_feature + i], schema.columns[i].kind));
    }
    auto bad_label = [&](const std::string& what) {
      fail(ErrorCode::kSchemaMismatch,
           "line " + std::to_string(line_number) + ": " + what);
    };
    if (layout.recurrence && !fields[*layout.recurrence].empty()) {
      const std::string& v = fields[*layout.recurrence];
      if (v == "RecurringWound") rec.label_recurrence = Recurrence::kRecurringWound;
      else if (v == "NewWound") rec.label_recurrence = Recurrence::kNewWound;
      else bad_label("bad WoundRecurrence '" + v + "'");
    }
    if (layout.category && !fields[*layout.category].empty()) {
      const std::string& v = fields[*layout.category];
      if (v == "ReAdmitPatient") rec.label_category = Category::kReAdmitPatient;
      else if (v == "NewPatient") rec.label_category = Category::kNewPatient;
      else bad_label("bad PatientCategory '" + v + "'");
    }
    if (layout.weeks && !fields[*layout.weeks].empty()) {
      Cell weeks = parse_cell(fields[*layout.weeks], FeatureKind::kNumeric);
      if (weeks.is_missing() || weeks.as_number() <= 0.0) {
        bad_label("bad WeeksToReadmit '" + fields[*layout.weeks] + "'");
      }
      if (schema.weeks_range && (weeks.as_number() < schema.weeks_range->first ||
                                 weeks.as_number() > schema.weeks_range->second)) {
        bad_label("WeeksToReadmit " + fields[*layout.weeks] + " outside range");
      }
      rec.label_weeks = weeks.as_number();
    }
    cohort.records.push_back(std::move(rec));
  }
  return cohort;
}

Cohort load_cohort(const std::string& path, const Schema& schema) {
  std::ifstream in(path);
  check(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path);
  return read_cohort(in, schema);
}

void write_cohort(const Cohort& cohort, std::ostream& out) {
  bool any_date = false, any_rec = false, any_cat = false, any_weeks = false;
  for (const auto& rec : cohort.records) {
    any_date |= rec.admission_date.has_value();
    any_rec |= rec.label_recurrence.has_value();
    any_cat |= rec.label_category.has_value();
    any_weeks |= rec.label_weeks.has_value();
  }
  std::vector<std::string> header = {std::string(kPatientIdColumn),
                                     std::string(kEpisodeNumberColumn)};
  if (any_date) header.emplace_back(kAdmissionDateColumn);
  for (const auto& c : cohort.schema.columns) header.push_back(c.name);
  if (any_rec) header.emplace_back(kRecurrenceColumn);
  if (any_cat) header.emplace_back(kCategoryColumn);
  if (any_weeks) header.emplace_back(kWeeksColumn);
  out << csv::join_line(header) << "\n";
  std::vector<std::string> row;
  for (const auto& rec : cohort.records) {
    row.clear();
    row.push_back(rec.patient_id);
    row.push_back(std::to_string(rec.episode_number));
    if (any_date) row.push_back(rec.admission_date.value_or(""));
    for (const Cell& cell : rec.values) row.push_back(format_cell(cell));
    if (any_rec) {
      row.push_back(rec.label_recurrence ? std::string(to_string(*rec.label_recurrence))
                                         : "");
    }
    if (any_cat) {
      row.push_back(rec.label_category ? std::string(to_string(*rec.label_category))
                                       : "");
    }
    if (any_weeks) {
      row.push_back(rec.label_weeks ? csv::format_double(*rec.label_weeks) : "");
    }
    out << csv::join_line(row) << "\n";
  }
}

void save_cohort(const Cohort& cohort, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  check(static_cast<bool>(out), ErrorCode::kIo, "cannot write " + path);
  write_cohort(cohort, out);
}

Cohort join_wound_episode(const Cohort& wound, const Cohort& episode) {
  Cohort out;
  out.schema.columns = wound.schema.columns;
  out.schema.granularity = Granularity::kCombined;
  out.schema.target = wound.schema.target ? wound.schema.target : episode.schema.target;
  out.schema.date_filter = wound.schema.date_filter;
  out.schema.weeks_range = wound.schema.weeks_range;
  std::vector<std::size_t> episode_extra;
  for (std::size_t i = 0; i < episode.schema.columns.size(); ++i) {
    if (!wound.schema.index_of(episode.schema.columns[i].name)) {
      episode_extra.push_back(i);
      out.schema.columns.push_back(episode.schema.columns[i]);
    }
  }

  std::map<std::pair<std::string, int>, std::vector<std::size_t>> by_key;
  for (std::size_t i = 0; i < episode.records.size(); ++i) {
    const auto& rec = episode.records[i];
    by_key[{rec.patient_id, rec.episode_number}].push_back(i);
  }
  for (const auto& w : wound.records) {
    auto it = by_key.find({w.patient_id, w.episode_number});
    if (it == by_key.end()) continue;
    for (std::size_t ei : it->second) {
      const auto& e = episode.records[ei];
      if (w.label_category && e.label_category &&
          *w.label_category != *e.label_category) {
        fail(ErrorCode::kLabelConflict,
             "patient " + w.patient_id + " episode " +
                 std::to_string(w.episode_number) +
                 " has different PatientCategory labels");
      }
      PatientRecord rec = w;
      rec.values.reserve(out.schema.columns.size());
      for (std::size_t i : episode_extra) rec.values.push_back(e.values[i]);
      if (!rec.label_category) rec.label_category = e.label_category;
      if (!rec.label_weeks) rec.label_weeks = e.label_weeks;
      if (!rec.admission_date) rec.admission_date = e.admission_date;
      out.records.push_back(std::move(rec));
    }
  }
  check(!out.records.empty(), ErrorCode::kEmptyJoin,
        "no (patient, episode) key is shared by both cohorts");
  return out;
}

PatientGroups group_by_patient(const Cohort& cohort) {
  PatientGroups groups;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < cohort.records.size(); ++r) {
    const std::string& id = cohort.records[r].patient_id;
    auto [it, inserted] = index.emplace(id, groups.ids.size());
    if (inserted) {
      groups.ids.push_back(id);
      groups.members.emplace_back();
    }
    groups.members[it->second].push_back(r);
  }
  return groups;
}

namespace {

// Patient groups in a seed-determined order that does not depend on the
// input row order.
std::vector<std::size_t> shuffled_groups(const PatientGroups& groups,
                                         std::uint64_t seed) {
  std::vector<std::size_t> order(groups.ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return groups.ids[a] < groups.ids[b];
  });
  Rng rng(seed);
  rng.shuffle(order);
  return order;
}

}  // namespace

SplitIndices split_indices(const Cohort& cohort, const SplitPlan& plan) {
  check(plan.train_fraction > 0 && plan.valid_fraction > 0 && plan.test_fraction > 0,
        ErrorCode::kInvalidArgument, "split fractions must be positive");
  const double total = plan.train_fraction + plan.valid_fraction + plan.test_fraction;
  check(std::abs(total - 1.0) < 1e-9, ErrorCode::kInvalidArgument,
        "split fractions must sum to 1");
  check(!cohort.empty(), ErrorCode::kEmptyCohort, "cannot split an empty cohort");
  const PatientGroups groups = group_by_patient(cohort);
  check(groups.ids.size() >= 3, ErrorCode::kTooFewPatients,
        "split needs at least 3 distinct patients, got " +
            std::to_string(groups.ids.size()));

  const double n = static_cast<double>(cohort.size());
  const double train_end = plan.train_fraction * n;
  const double valid_end = (plan.train_fraction + plan.valid_fraction) * n;
  std::vector<std::vector<std::size_t>> parts(3);
  double placed = 0.0;
  for (std::size_t g : shuffled_groups(groups, derive_seed(plan.seed, "split"))) {
    const int part = placed < train_end - 1e-9 ? 0 : (placed < valid_end - 1e-9 ? 1 : 2);
    parts[part].push_back(g);
    placed += static_cast<double>(groups.members[g].size());
  }
  // A very large group can starve a later partition; borrow one group from
  // the largest neighbour so every partition is nonempty.
  for (int p : {1, 2}) {
    if (!parts[p].empty()) continue;
    int donor = parts[0].size() >= parts[3 - p].size() ? 0 : 3 - p;
    if (parts[donor].size() < 2) donor = donor == 0 ? 3 - p : 0;
    parts[p].push_back(parts[donor].back());
    parts[donor].pop_back();
  }
  SplitIndices out;
  std::vector<std::size_t>* targets[3] = {&out.train, &out.valid, &out.test};
  for (int p = 0; p < 3; ++p) {
    for (std::size_t g : parts[p]) {
      targets[p]->insert(targets[p]->end(), groups.members[g].begin(),
                         groups.members[g].end());
    }
    std::sort(targets[p]->begin(), targets[p]->end());
  }
  return out;
}

CohortSplit split(const Cohort& cohort, const SplitPlan& plan) {
  const SplitIndices idx = split_indices(cohort, plan);
  return {subset(cohort, idx.train), subset(cohort, idx.valid),
          subset(cohort, idx.test)};
}

std::vector<Fold> kfold_plan(const Cohort& cohort, int k, std::uint64_t seed) {
  check(k >= 2, ErrorCode::kInvalidArgument, "k-fold needs K >= 2");
  const PatientGroups groups = group_by_patient(cohort);
  check(groups.ids.size() >= static_cast<std::size_t>(k), ErrorCode::kTooFewPatients,
        std::to_string(k) + "-fold plan needs at least " + std::to_string(k) +
            " distinct patients, got " + std::to_string(groups.ids.size()));
  std::vector<std::vector<std::size_t>> valid(k);
  std::vector<std::size_t> load(k, 0);
  for (std::size_t g : shuffled_groups(groups, derive_seed(seed, "kfold"))) {
    std::size_t best = 0;
    for (std::size_t f = 1; f < static_cast<std::size_t>(k); ++f) {
      if (load[f] < load[best]) best = f;
    }
    valid[best].insert(valid[best].end(), groups.members[g].begin(),
                       groups.members[g].end());
    load[best] += groups.members[g].size();
  }
  std::vector<Fold> folds(k);
  for (int f = 0; f < k; ++f) {
    std::sort(valid[f].begin(), valid[f].end());
    folds[f].valid = valid[f];
    for (int other = 0; other < k; ++other) {
      if (other == f) continue;
      folds[f].train.insert(folds[f].train.end(), valid[other].begin(),
                            valid[other].end());
    }
    std::sort(folds[f].train.begin(), folds[f].train.end());
  }
  return folds;
}

}  // namespace progpipe
