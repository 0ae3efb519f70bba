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

#include "progpipe/synthgen.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <unordered_map>

#include "progpipe/csv.h"
#include "progpipe/error.h"
#include "progpipe/random.h"

namespace progpipe {

namespace {

constexpr double kWeeksScoreSlope = 1.2;
constexpr double kWeeksNoiseShape = 3.0;
constexpr double kRecurrenceInteraction = 1.0;

const std::vector<std::string> kNonCompliance = {
    "NonComplianceWoundVisitsRate", "NonComplianceDietRate",
    "NonComplianceOffLoadRate",     "NonComplianceExerciseRate",
    "NonComplianceMedicationRate",  "NonComplianceLimbRate",
    "NonComplianceCompressionRate", "NonComplianceDressingRate",
    "NonComplianceSmokingRate",     "NonComplianceHBOVisitsRate",
};

// Flag name and prevalence.
const std::vector<std::pair<std::string, double>> kComorbidities = {
    {"Diabetes", 0.42},
    {"Anemia", 0.25},
    {"EndStageRenalDiseasewithdialysis", 0.05},
    {"VenousInsuffiency", 0.30},
    {"ChronicObstructivePulmonaryDisease", 0.20},
    {"AtheroscleroticHeartDisease", 0.18},
    {"CoronaryArteryDisease", 0.28},
    {"Smoking", 0.15},
    {"Edema", 0.35},
    {"PeripheralArterialDisease", 0.25},
    {"EndStageRenalDiseasewithoutdialysis", 0.12},
    {"Hypertension", 0.65},
    {"CongestiveHeartFailure", 0.20},
    {"Obesity", 0.30},
    {"WeightGain", 0.10},
    {"MarkedWeightChange", 0.12},
};

// Wound type, probability, chance the wound sits on a lower extremity,
// chance its stage is full thickness. The first four are chronic.
struct WoundTypeInfo {
  const char* name;
  double prob;
  double lower_extremity;
  double full_thickness;
};
const std::vector<WoundTypeInfo> kWoundTypes = {
    {"Pressure Ulcer", 0.22, 0.45, 0.35}, {"Venous Ulcer", 0.16, 0.92, 0.20},
    {"Diabetic Ulcer", 0.16, 0.90, 0.30}, {"Arterial Ulcer", 0.06, 0.90, 0.30},
    {"Surgical", 0.14, 0.35, 0.10},       {"Trauma", 0.10, 0.35, 0.10},
    {"Skin Tear", 0.06, 0.35, 0.10},      {"Burn", 0.02, 0.35, 0.10},
    {"Other", 0.08, 0.35, 0.10},
};
constexpr std::size_t kChronicTypeCount = 4;

const std::vector<std::pair<std::string, double>> kLowerLocations = {
    {"Foot", 0.27}, {"Heel", 0.17}, {"Toe", 0.13}, {"Lower Leg", 0.30}, {"Ankle", 0.13}};
const std::vector<std::pair<std::string, double>> kOtherLocations = {
    {"Sacrum", 0.30}, {"Buttock", 0.18}, {"Hip", 0.12}, {"Abdomen", 0.15},
    {"Arm", 0.10},    {"Back", 0.10},    {"Head", 0.05}};
const std::vector<std::pair<std::string, double>> kOtherStages = {
    {"Stage 1", 0.12}, {"Stage 2", 0.25},           {"Stage 3", 0.18},
    {"Stage 4", 0.08}, {"Unstageable", 0.07},        {"Partial Thickness", 0.22},
    {"Deep Tissue Injury", 0.08}};
const std::vector<std::pair<std::string, double>> kWoundStatus = {
    {"Healed", 0.60}, {"Not Healed", 0.25}, {"Amputated", 0.03}, {"Transferred", 0.12}};
const std::vector<std::pair<std::string, double>> kDischargeStatus = {
    {"Healed", 0.55},       {"Home Health", 0.15},  {"Hospice", 0.05},
    {"Hospitalized", 0.12}, {"Noncompliant", 0.08}, {"Other", 0.05}};
// Pain 0..11; 11 is the most frequent value.
const std::vector<double> kPainWeights = {0.10, 0.04, 0.06, 0.07, 0.07, 0.08,
                                          0.07, 0.07, 0.08, 0.08, 0.10, 0.18};

constexpr const char* kFullThickness = "Full Thickness";

bool is_chronic_type(const std::string& type) {
  for (std::size_t i = 0; i < kChronicTypeCount; ++i) {
    if (type == kWoundTypes[i].name) return true;
  }
  return false;
}

bool is_lower_extremity(const std::string& location) {
  for (const auto& [name, p] : kLowerLocations) {
    if (location == name) return true;
  }
  return false;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double round_to(double value, double step) { return std::round(value / step) * step; }

template <typename T>
const std::string& pick(Rng& rng, const std::vector<std::pair<std::string, T>>& table) {
  std::vector<double> weights;
  weights.reserve(table.size());
  for (const auto& entry : table) weights.push_back(entry.second);
  return table[rng.categorical(weights)].first;
}

// Days since 1970-01-01 to yyyy-mm-dd (proleptic Gregorian).
std::string format_date(long days) {
  days += 719468;
  const long era = (days >= 0 ? days : days - 146096) / 146097;
  const long doe = days - era * 146097;
  const long yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  long y = yoe + era * 400;
  const long doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const long mp = (5 * doy + 2) / 153;
  const long d = doy - (153 * mp + 2) / 5 + 1;
  const long m = mp < 10 ? mp + 3 : mp - 9;
  if (m <= 2) ++y;
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%04d-%02d-%02d", static_cast<int>(y), static_cast<int>(m), static_cast<int>(d));
  return buffer;
}

constexpr long kFirstDay = 16436;  // 2015-01-01
constexpr long kLastDay = 18443;   // 2020-06-30

class ColumnIndex {
 public:
  explicit ColumnIndex(const Schema& schema) {
    for (std::size_t i = 0; i < schema.columns.size(); ++i) {
      index_.emplace(schema.columns[i].name, i);
    }
  }
  std::size_t operator()(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) fail(ErrorCode::kInternal, "no column " + name);
    return it->second;
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

double number_or(const Cell& cell, double fallback) {
  return cell.is_number() ? cell.as_number() : fallback;
}

double feature_value(const Schema& schema, const std::vector<Cell>& values,
                     const std::string& name, double fallback) {
  if (name == "ComorbidityCount") {
    double count = 0.0;
    for (const auto& [flag, p] : kComorbidities) {
      if (auto i = schema.index_of(flag)) count += number_or(values[*i], 0.0);
    }
    return count;
  }
  if (auto i = schema.index_of(name)) return number_or(values[*i], fallback);
  return fallback;
}

double xor_indicator(const Schema& schema, const std::vector<Cell>& values) {
  const bool old = feature_value(schema, values, "PtAge", 0.0) > 75.0;
  const bool heavy = feature_value(schema, values, "AvgBMI", 0.0) > 30.0;
  return old != heavy ? 1.0 : 0.0;
}

// Offset b such that mean(sigmoid(base + b)) == rate.
double solve_offset(const std::vector<double>& base, double rate) {
  if (rate <= 0.0) return -1e9;
  if (rate >= 1.0) return 1e9;
  double lo = -60.0, hi = 60.0;
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    double mean = 0.0;
    for (double s : base) mean += sigmoid(s + mid);
    mean /= static_cast<double>(base.size());
    if (mean < rate) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

const std::vector<PlantedWeight>& episode_risk_weights() {
  static const std::vector<PlantedWeight> weights = [] {
    std::vector<PlantedWeight> w = {
        {"ChronicWoundsforEpisode", 1.2, 1.0, 0.9},
        {"LowerExtremityWoundsforEpisode", 1.16, 1.0, 0.6},
        {"FullThicknessWoundsforEpisode", 0.43, 0.65, 0.6},
        {"ComorbidityCount", 3.9, 1.6, 0.7},
        {"NonComplianceWoundVisitsRate", 0.35, 0.2, 0.7},
        {"NonComplianceDressingRate", 0.35, 0.2, 0.6},
        {"NonComplianceOffLoadRate", 0.35, 0.2, 0.5},
        {"AvgDaysinTXforwounds", 55.0, 45.0, 0.3},
        {"AvgPainLevelforEpisode", 6.5, 3.0, 0.25},
        {"PtAge", 75.0, 11.0, 0.25},
    };
    for (const auto& name : kNonCompliance) {
      if (name == "NonComplianceWoundVisitsRate" || name == "NonComplianceDressingRate" ||
          name == "NonComplianceOffLoadRate") {
        continue;
      }
      w.push_back({name, 0.35, 0.2, 0.12});
    }
    return w;
  }();
  return weights;
}

// Features here are wound-row indicators derived from the categorical
// columns (ChronicWoundType, LowerExtremityLocation, FullThicknessStage)
// or plain columns.
const std::vector<PlantedWeight>& recurrence_weights() {
  static const std::vector<PlantedWeight> weights = {
      {"ChronicWoundType", 0.6, 0.49, 0.7},
      {"LowerExtremityLocation", 0.58, 0.49, 0.5},
      {"FullThicknessStage", 0.215, 0.41, 0.6},
      {"DaysinTXforWounds", 55.0, 45.0, 0.3},
      {"AvgPainLevelforWound", 6.5, 3.4, 0.3},
      {"NonComplianceDressingRate", 0.35, 0.2, 0.4},
      {"PtAge", 75.0, 11.0, 0.2},
  };
  return weights;
}

const std::vector<std::string>& comorbidity_flags() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, p] : kComorbidities) out.push_back(name);
    return out;
  }();
  return names;
}

const std::vector<std::string>& noncompliance_columns() { return kNonCompliance; }

double EpisodeRiskModel::score(const Schema& schema,
                               const std::vector<Cell>& values) const {
  double s = offset;
  const double wounds = feature_value(schema, values, "WoundsforEpisode", mean_wound_count);
  s += wound_count_weight * (wounds - mean_wound_count);
  for (const auto& w : episode_risk_weights()) {
    const double x = feature_value(schema, values, w.feature, w.center);
    s += w.weight * (x - w.center) / w.scale;
  }
  s += xor_weight * (xor_indicator(schema, values) - 0.5);
  return s;
}

double EpisodeRiskModel::risk(const Schema& schema,
                              const std::vector<Cell>& values) const {
  return sigmoid(score(schema, values));
}

double RecurrenceModel::score(const Schema& schema,
                              const std::vector<Cell>& values) const {
  auto category = [&](const char* column) -> std::string {
    auto i = schema.index_of(column);
    if (!i || !values[*i].is_category()) return {};
    return values[*i].as_category();
  };
  const double chronic = is_chronic_type(category("WoundType")) ? 1.0 : 0.0;
  const double lower = is_lower_extremity(category("WoundLocation")) ? 1.0 : 0.0;
  const double full = category("WoundStage") == kFullThickness ? 1.0 : 0.0;
  double s = offset;
  for (const auto& w : recurrence_weights()) {
    double x;
    if (w.feature == "ChronicWoundType") x = chronic;
    else if (w.feature == "LowerExtremityLocation") x = lower;
    else if (w.feature == "FullThicknessStage") x = full;
    else x = feature_value(schema, values, w.feature, w.center);
    s += w.weight * (x - w.center) / w.scale;
  }
  s += interaction_weight * (chronic * full - 0.13);
  return s;
}

void CohortSpec::validate() const {
  auto bad = [](const std::string& why) { fail(ErrorCode::kSpecInvalid, why); };
  if (n_wound_rows <= 0 || n_episode_rows <= 0) bad("row counts must be positive");
  for (double rate : {recurrence_rate, readmit_rate_wound, readmit_rate_episode,
                      missing_rate}) {
    if (!(rate >= 0.0 && rate <= 1.0)) bad("rates must lie in [0, 1]");
  }
  if (!(age_min <= age_mean && age_mean <= age_max)) bad("need age_min <= age_mean <= age_max");
  if (!(weeks_min <= weeks_mean && weeks_mean <= weeks_max)) {
    bad("need weeks_min <= weeks_mean <= weeks_max");
  }
  if (weeks_min <= 0.0) bad("weeks_min must be positive");
  if (!std::isfinite(xor_weight)) bad("xor_weight must be finite");
}

CohortSpec default_spec() { return CohortSpec{}; }

nlohmann::json spec_to_json(const CohortSpec& spec) {
  return {
      {"n_wound_rows", spec.n_wound_rows},
      {"n_episode_rows", spec.n_episode_rows},
      {"recurrence_rate", spec.recurrence_rate},
      {"readmit_rate_wound", spec.readmit_rate_wound},
      {"readmit_rate_episode", spec.readmit_rate_episode},
      {"age_mean", spec.age_mean},
      {"age_min", spec.age_min},
      {"age_max", spec.age_max},
      {"weeks_min", spec.weeks_min},
      {"weeks_max", spec.weeks_max},
      {"weeks_mean", spec.weeks_mean},
      {"weeks_shape", spec.weeks_shape},
      {"missing_rate", spec.missing_rate},
      {"xor_weight", spec.xor_weight},
      {"seed", spec.seed},
  };
}

CohortSpec spec_from_json(const nlohmann::json& doc) {
  CohortSpec spec = default_spec();
  try {
    spec.n_wound_rows = doc.value("n_wound_rows", spec.n_wound_rows);
    spec.n_episode_rows = doc.value("n_episode_rows", spec.n_episode_rows);
    spec.recurrence_rate = doc.value("recurrence_rate", spec.recurrence_rate);
    spec.readmit_rate_wound = doc.value("readmit_rate_wound", spec.readmit_rate_wound);
    spec.readmit_rate_episode = doc.value("readmit_rate_episode", spec.readmit_rate_episode);
    spec.age_mean = doc.value("age_mean", spec.age_mean);
    spec.age_min = doc.value("age_min", spec.age_min);
    spec.age_max = doc.value("age_max", spec.age_max);
    spec.weeks_min = doc.value("weeks_min", spec.weeks_min);
    spec.weeks_max = doc.value("weeks_max", spec.weeks_max);
    spec.weeks_mean = doc.value("weeks_mean", spec.weeks_mean);
    spec.weeks_shape = doc.value("weeks_shape", spec.weeks_shape);
    spec.missing_rate = doc.value("missing_rate", spec.missing_rate);
    spec.xor_weight = doc.value("xor_weight", spec.xor_weight);
    spec.seed = doc.value("seed", spec.seed);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kSpecInvalid, std::string("cohort spec json: ") + e.what());
  }
  spec.validate();
  return spec;
}

namespace {

void add_common_columns(Schema& schema) {
  schema.columns.push_back({"PtAge", FeatureKind::kNumeric});
  schema.columns.push_back({"AvgBMI", FeatureKind::kNumeric});
  for (const auto& name : kNonCompliance) {
    schema.columns.push_back({name, FeatureKind::kNumeric});
  }
}

}  // namespace

Schema wound_schema() {
  Schema schema;
  schema.granularity = Granularity::kWound;
  schema.target = std::string(kCategoryColumn);
  schema.weeks_range = std::make_pair(1.0, 15.0);
  schema.columns = {
      {"WoundStatus", FeatureKind::kCategorical},
      {"PatientDischargeStatus", FeatureKind::kCategorical},
      {"PalliativeCare", FeatureKind::kFlag},
      {"WoundType", FeatureKind::kCategorical},
      {"WoundLocation", FeatureKind::kCategorical},
      {"WoundStage", FeatureKind::kCategorical},
      {"DaysinTXforWounds", FeatureKind::kNumeric},
      {"AvgPainLevelforWound", FeatureKind::kNumeric},
      {"VisitsforWound", FeatureKind::kNumeric},
      {"DaysinTXforPatients", FeatureKind::kNumeric},
      {"DaysPriortoTX", FeatureKind::kNumeric},
  };
  add_common_columns(schema);
  return schema;
}

Schema episode_schema() {
  Schema schema;
  schema.granularity = Granularity::kEpisode;
  schema.target = std::string(kCategoryColumn);
  schema.weeks_range = std::make_pair(1.0, 15.0);
  schema.columns = {
      {"WoundsforEpisode", FeatureKind::kNumeric},
      {"ChronicWoundsforEpisode", FeatureKind::kNumeric},
      {"AvgDaysinTXforwounds", FeatureKind::kNumeric},
      {"AvgPainLevelforEpisode", FeatureKind::kNumeric},
      {"LowerExtremityWoundsforEpisode", FeatureKind::kNumeric},
      {"AVGTemperature", FeatureKind::kNumeric},
  };
  for (const auto& [name, p] : kComorbidities) {
    schema.columns.push_back({name, FeatureKind::kFlag});
  }
  schema.columns.push_back({"PatientDischargeStatus", FeatureKind::kCategorical});
  schema.columns.push_back({"FullThicknessWoundsforEpisode", FeatureKind::kNumeric});
  schema.columns.push_back({"VisitsforEpisode", FeatureKind::kNumeric});
  schema.columns.push_back({"DaysinTXforPatients", FeatureKind::kNumeric});
  schema.columns.push_back({"PalliativeCare", FeatureKind::kFlag});
  add_common_columns(schema);
  return schema;
}

namespace {

struct PatientDraft {
  double age = 75.0;
  double bmi = 30.0;
  double compliance = 0.4;
  std::vector<double> flags;
  long first_day = kFirstDay;
};

struct WoundDraft {
  std::size_t episode = 0;
  std::string type, location, stage, status;
  double days = 0.0, pain = 0.0, visits = 0.0, days_prior = 0.0;
};

}  // namespace

SynthCohorts generate(const CohortSpec& spec) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, "synthgen"));
  SynthCohorts out;
  out.wound.schema = wound_schema();
  out.episode.schema = episode_schema();
  const Schema& es = out.episode.schema;
  const Schema& ws = out.wound.schema;
  const ColumnIndex ecol(es);
  const ColumnIndex wcol(ws);

  // Patients and their episodes.
  const std::size_t n_episodes = static_cast<std::size_t>(spec.n_episode_rows);
  std::vector<PatientDraft> patients;
  std::vector<std::size_t> episode_patient;
  std::vector<int> episode_number;
  while (episode_patient.size() < n_episodes) {
    PatientDraft p;
    p.age = std::clamp(std::round(rng.normal(spec.age_mean, 11.0)), spec.age_min,
                       spec.age_max);
    p.bmi = std::clamp(round_to(rng.normal(30.0, 6.5), 0.1), 14.0, 65.0);
    p.compliance = std::pow(rng.uniform(), 1.5);
    for (const auto& [name, prevalence] : kComorbidities) {
      p.flags.push_back(rng.bernoulli(prevalence) ? 1.0 : 0.0);
    }
    p.first_day = kFirstDay + static_cast<long>(rng.below(kLastDay - kFirstDay - 180));
    const int episodes = 1 + rng.poisson(1.2);
    for (int e = 1; e <= episodes && episode_patient.size() < n_episodes; ++e) {
      episode_patient.push_back(patients.size());
      episode_number.push_back(e);
    }
    patients.push_back(std::move(p));
  }

  // Wounds per episode: one each, then the surplus dealt uniformly.
  std::vector<std::size_t> wound_episode;
  const std::size_t n_wounds = static_cast<std::size_t>(spec.n_wound_rows);
  if (n_wounds >= n_episodes) {
    for (std::size_t e = 0; e < n_episodes; ++e) wound_episode.push_back(e);
    for (std::size_t w = n_episodes; w < n_wounds; ++w) {
      wound_episode.push_back(rng.below(n_episodes));
    }
  } else {
    std::vector<std::size_t> order = rng.permutation(n_episodes);
    order.resize(n_wounds);
    wound_episode = order;
  }
  std::sort(wound_episode.begin(), wound_episode.end());
  std::vector<double> wound_count(n_episodes, 0.0);
  for (std::size_t e : wound_episode) wound_count[e] += 1.0;

  // Wound attributes.
  std::vector<WoundDraft> wounds(n_wounds);
  std::vector<double> type_weights;
  for (const auto& t : kWoundTypes) type_weights.push_back(t.prob);
  for (std::size_t w = 0; w < n_wounds; ++w) {
    WoundDraft& d = wounds[w];
    d.episode = wound_episode[w];
    const WoundTypeInfo& type = kWoundTypes[rng.categorical(type_weights)];
    d.type = type.name;
    d.location = rng.bernoulli(type.lower_extremity) ? pick(rng, kLowerLocations)
                                                     : pick(rng, kOtherLocations);
    d.stage = rng.bernoulli(type.full_thickness) ? std::string(kFullThickness)
                                                 : pick(rng, kOtherStages);
    d.status = pick(rng, kWoundStatus);
    const double chronic = is_chronic_type(d.type) ? 1.0 : 0.0;
    d.days = std::clamp(std::round(std::exp(rng.normal(std::log(40.0) + 0.3 * chronic, 0.7))),
                        1.0, 730.0);
    d.pain = static_cast<double>(rng.categorical(kPainWeights));
    d.visits = std::max(1.0, std::round(d.days / 7.0 * (0.8 + 0.4 * rng.uniform())));
    d.days_prior = std::clamp(std::round(std::exp(rng.normal(std::log(20.0), 1.0))), 0.0,
                              3650.0);
  }

  // Episode rows.
  std::vector<std::vector<std::size_t>> episode_wounds(n_episodes);
  for (std::size_t w = 0; w < n_wounds; ++w) episode_wounds[wounds[w].episode].push_back(w);
  std::vector<std::vector<Cell>> evalues(n_episodes,
                                         std::vector<Cell>(es.columns.size()));
  std::vector<std::string> admission(n_episodes);
  long last_day = 0;
  for (std::size_t e = 0; e < n_episodes; ++e) {
    const PatientDraft& p = patients[episode_patient[e]];
    auto& v = evalues[e];
    auto set = [&](const std::string& name, double x) { v[ecol(name)] = Cell::number(x); };
    if (episode_number[e] == 1) last_day = p.first_day;
    else last_day = std::min(kLastDay, last_day + 60 + static_cast<long>(rng.below(340)));
    admission[e] = format_date(last_day);

    double chronic = 0, lower = 0, full = 0, days_sum = 0, pain_sum = 0, visits = 0,
           days_max = 0;
    for (std::size_t w : episode_wounds[e]) {
      const WoundDraft& d = wounds[w];
      chronic += is_chronic_type(d.type) ? 1.0 : 0.0;
      lower += is_lower_extremity(d.location) ? 1.0 : 0.0;
      full += d.stage == kFullThickness ? 1.0 : 0.0;
      days_sum += d.days;
      pain_sum += d.pain;
      visits += d.visits;
      days_max = std::max(days_max, d.days);
    }
    const double k = wound_count[e];
    set("WoundsforEpisode", k);
    set("ChronicWoundsforEpisode", chronic);
    set("AvgDaysinTXforwounds", k > 0 ? round_to(days_sum / k, 0.01) : 0.0);
    set("AvgPainLevelforEpisode", k > 0 ? round_to(pain_sum / k, 0.01) : 0.0);
    set("LowerExtremityWoundsforEpisode", lower);
    set("AVGTemperature", round_to(rng.normal(98.3, 0.7), 0.1));
    for (std::size_t i = 0; i < kComorbidities.size(); ++i) {
      set(kComorbidities[i].first, p.flags[i]);
    }
    v[ecol("PatientDischargeStatus")] = Cell::category(pick(rng, kDischargeStatus));
    set("FullThicknessWoundsforEpisode", full);
    set("VisitsforEpisode", visits);
    set("DaysinTXforPatients", days_max + static_cast<double>(rng.below(15)));
    set("PalliativeCare", rng.bernoulli(0.06) ? 1.0 : 0.0);
    set("PtAge", std::min(spec.age_max, p.age + (episode_number[e] - 1)));
    set("AvgBMI", p.bmi);
    const double compliance = std::clamp(p.compliance + rng.normal(0.0, 0.08), 0.0, 1.0);
    for (const auto& name : kNonCompliance) {
      const double rate = 0.35 * compliance + 0.65 * std::pow(rng.uniform(), 1.5) - 0.05;
      set(name, round_to(std::clamp(rate, 0.0, 1.0), 0.001));
    }
  }

  // Calibrate the episode label model.
  EpisodeRiskModel& model = out.episode_model;
  model.xor_weight = spec.xor_weight;
  double mean_k = 0.0;
  for (double k : wound_count) mean_k += k;
  mean_k /= static_cast<double>(n_episodes);
  model.mean_wound_count = mean_k;
  std::vector<double> base(n_episodes);
  for (std::size_t e = 0; e < n_episodes; ++e) base[e] = model.score(es, evalues[e]);
  auto offset_for = [&](double gamma, std::vector<double>& shifted) {
    for (std::size_t e = 0; e < n_episodes; ++e) {
      shifted[e] = base[e] + gamma * (wound_count[e] - mean_k);
    }
    return solve_offset(shifted, spec.readmit_rate_episode);
  };
  auto wound_rate = [&](double gamma) {
    std::vector<double> shifted(n_episodes);
    const double b = offset_for(gamma, shifted);
    double num = 0.0, den = 0.0;
    for (std::size_t e = 0; e < n_episodes; ++e) {
      num += wound_count[e] * sigmoid(shifted[e] + b);
      den += wound_count[e];
    }
    return den > 0 ? num / den : 0.0;
  };
  double gamma = 0.0;
  const bool interior = spec.readmit_rate_episode > 0.0 && spec.readmit_rate_episode < 1.0;
  if (interior && n_wounds > 0) {
    double lo = -4.0, hi = 4.0;
    if (wound_rate(lo) >= spec.readmit_rate_wound) {
      gamma = lo;
    } else if (wound_rate(hi) <= spec.readmit_rate_wound) {
      gamma = hi;
    } else {
      for (int iter = 0; iter < 40; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (wound_rate(mid) < spec.readmit_rate_wound) lo = mid; else hi = mid;
      }
      gamma = 0.5 * (lo + hi);
    }
  }
  {
    std::vector<double> shifted(n_episodes);
    model.wound_count_weight = gamma;
    model.offset = offset_for(gamma, shifted);
  }

  std::vector<double> risk(n_episodes);
  std::vector<bool> readmit(n_episodes);
  for (std::size_t e = 0; e < n_episodes; ++e) {
    risk[e] = model.risk(es, evalues[e]);
    readmit[e] = rng.uniform() < risk[e];
  }

  // Weeks to readmit: a power-law multiplicative noise around a scale that
  // shrinks exponentially with the episode's risk score, rounded and
  // clamped. The scale multiplier is solved so the mean hits weeks_mean.
  std::vector<std::size_t> readmitted;
  for (std::size_t e = 0; e < n_episodes; ++e) {
    if (readmit[e]) readmitted.push_back(e);
  }
  std::vector<double> weeks(n_episodes, 0.0);
  if (!readmitted.empty()) {
    const double alpha = spec.weeks_shape > 0.0 ? spec.weeks_shape : kWeeksNoiseShape;
    double mean_score = 0.0;
    std::vector<double> score(readmitted.size());
    for (std::size_t i = 0; i < readmitted.size(); ++i) {
      score[i] = model.score(es, evalues[readmitted[i]]);
      mean_score += score[i];
    }
    mean_score /= static_cast<double>(readmitted.size());
    std::vector<double> base(readmitted.size());
    for (std::size_t i = 0; i < readmitted.size(); ++i) {
      base[i] = std::exp(-kWeeksScoreSlope * (score[i] - mean_score)) *
                std::pow(rng.uniform_open(), -1.0 / alpha);
    }
    auto draw = [&](double multiplier, std::size_t i) {
      return std::clamp(std::round(multiplier * base[i]), spec.weeks_min, spec.weeks_max);
    };
    auto mean_weeks = [&](double multiplier) {
      double total = 0.0;
      for (std::size_t i = 0; i < base.size(); ++i) total += draw(multiplier, i);
      return total / static_cast<double>(base.size());
    };
    // mean_weeks is non-decreasing in the multiplier.
    double lo = 1e-3, hi = 1e3;
    for (int iter = 0; iter < 80; ++iter) {
      const double mid = std::sqrt(lo * hi);
      if (mean_weeks(mid) < spec.weeks_mean) lo = mid; else hi = mid;
    }
    const double multiplier =
        std::abs(mean_weeks(lo) - spec.weeks_mean) < std::abs(mean_weeks(hi) - spec.weeks_mean)
            ? lo
            : hi;
    out.weeks_exponent = alpha;
    out.weeks_scale = multiplier;
    for (std::size_t i = 0; i < readmitted.size(); ++i) weeks[readmitted[i]] = draw(multiplier, i);
  }

  // Wound rows.
  std::vector<std::vector<Cell>> wvalues(n_wounds, std::vector<Cell>(ws.columns.size()));
  for (std::size_t w = 0; w < n_wounds; ++w) {
    const WoundDraft& d = wounds[w];
    const auto& ev = evalues[d.episode];
    auto& v = wvalues[w];
    v[wcol("WoundStatus")] = Cell::category(d.status);
    v[wcol("WoundType")] = Cell::category(d.type);
    v[wcol("WoundLocation")] = Cell::category(d.location);
    v[wcol("WoundStage")] = Cell::category(d.stage);
    v[wcol("DaysinTXforWounds")] = Cell::number(d.days);
    v[wcol("AvgPainLevelforWound")] = Cell::number(d.pain);
    v[wcol("VisitsforWound")] = Cell::number(d.visits);
    v[wcol("DaysPriortoTX")] = Cell::number(d.days_prior);
    for (const char* shared : {"PatientDischargeStatus", "PalliativeCare",
                               "DaysinTXforPatients", "PtAge", "AvgBMI"}) {
      v[wcol(shared)] = ev[ecol(shared)];
    }
    for (const auto& name : kNonCompliance) v[wcol(name)] = ev[ecol(name)];
  }

  // Recurrence labels.
  RecurrenceModel& rmodel = out.recurrence_model;
  rmodel.interaction_weight = kRecurrenceInteraction;
  std::vector<bool> recurring(n_wounds, false);
  if (n_wounds > 0) {
    std::vector<double> rbase(n_wounds);
    for (std::size_t w = 0; w < n_wounds; ++w) rbase[w] = rmodel.score(ws, wvalues[w]);
    rmodel.offset = solve_offset(rbase, spec.recurrence_rate);
    for (std::size_t w = 0; w < n_wounds; ++w) {
      recurring[w] = rng.uniform() < sigmoid(rbase[w] + rmodel.offset);
    }
  }

  // Missingness on numeric columns, after all labels are planted.
  auto punch_holes = [&](const Schema& schema, std::vector<std::vector<Cell>>& rows) {
    if (spec.missing_rate <= 0.0) return;
    for (auto& row : rows) {
      for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        if (schema.columns[c].kind != FeatureKind::kNumeric) continue;
        if (rng.uniform() < spec.missing_rate) row[c] = Cell::missing();
      }
    }
  };
  punch_holes(es, evalues);
  punch_holes(ws, wvalues);

  std::vector<std::string> patient_ids(patients.size());
  for (std::size_t p = 0; p < patients.size(); ++p) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "P%06zu", p + 1);
    patient_ids[p] = buffer;
  }
  out.episode.records.reserve(n_episodes);
  for (std::size_t e = 0; e < n_episodes; ++e) {
    PatientRecord rec;
    rec.patient_id = patient_ids[episode_patient[e]];
    rec.episode_number = episode_number[e];
    rec.admission_date = admission[e];
    rec.values = std::move(evalues[e]);
    rec.label_category = readmit[e] ? Category::kReAdmitPatient : Category::kNewPatient;
    if (readmit[e]) rec.label_weeks = weeks[e];
    out.episode.records.push_back(std::move(rec));
  }
  out.wound.records.reserve(n_wounds);
  for (std::size_t w = 0; w < n_wounds; ++w) {
    const std::size_t e = wounds[w].episode;
    PatientRecord rec;
    rec.patient_id = patient_ids[episode_patient[e]];
    rec.episode_number = episode_number[e];
    rec.admission_date = admission[e];
    rec.values = std::move(wvalues[w]);
    rec.label_recurrence = recurring[w] ? Recurrence::kRecurringWound : Recurrence::kNewWound;
    rec.label_category = readmit[e] ? Category::kReAdmitPatient : Category::kNewPatient;
    if (readmit[e]) rec.label_weeks = weeks[e];
    out.wound.records.push_back(std::move(rec));
  }
  return out;
}

std::vector<std::string> planted_feature_ranking(const CohortSpec& spec) {
  std::map<std::string, double> effect;
  for (const auto& w : episode_risk_weights()) {
    if (w.feature == "ComorbidityCount") continue;
    effect[w.feature] += std::abs(w.weight);
  }
  effect["PtAge"] += std::abs(spec.xor_weight) / 2.0;
  effect["AvgBMI"] += std::abs(spec.xor_weight) / 2.0;
  std::vector<std::pair<std::string, double>> ranked(effect.begin(), effect.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> names;
  for (const auto& [name, value] : ranked) names.push_back(name);
  return names;
}

void write_histograms(const SynthCohorts& cohorts, std::ostream& out) {
  // (group, column, value) -> (negative count, positive count)
  std::map<std::tuple<std::string, std::string, std::string>, std::pair<long, long>> bins;
  auto add = [&](const std::string& group, const std::string& column,
                 const std::string& value, bool positive) {
    auto& slot = bins[{group, column, value}];
    (positive ? slot.second : slot.first) += 1;
  };
  const Schema& ws = cohorts.wound.schema;
  for (const auto& rec : cohorts.wound.records) {
    const bool recurring = rec.label_recurrence == Recurrence::kRecurringWound;
    for (const char* column : {"WoundType", "WoundLocation", "WoundStage"}) {
      const Cell& cell = rec.values[*ws.index_of(column)];
      if (cell.is_category()) add("recurrence", column, cell.as_category(), recurring);
    }
    const Cell& pain = rec.values[*ws.index_of("AvgPainLevelforWound")];
    if (pain.is_number()) {
      add("category", "AvgPainLevelforWound", csv::format_double(pain.as_number()),
          rec.label_category == Category::kReAdmitPatient);
    }
  }
  const Schema& es = cohorts.episode.schema;
  for (const auto& rec : cohorts.episode.records) {
    const bool readmit = rec.label_category == Category::kReAdmitPatient;
    const Cell& age = rec.values[*es.index_of("PtAge")];
    if (age.is_number()) {
      char bucket[32];
      const int lo = static_cast<int>(std::floor(age.as_number() / 5.0)) * 5;
      std::snprintf(bucket, sizeof(bucket), "%03d-%03d", lo, lo + 4);
      add("category", "PtAge", bucket, readmit);
    }
    for (const auto& flag : comorbidity_flags()) {
      const Cell& cell = rec.values[*es.index_of(flag)];
      if (cell.is_number() && cell.as_number() > 0.5) add("comorbidity", flag, "1", readmit);
    }
  }
  out << "label,column,value,class_negative,class_positive\n";
  for (const auto& [key, counts] : bins) {
    const auto& [group, column, value] = key;
    out << csv::join_line({group, column, value, std::to_string(counts.first),
                           std::to_string(counts.second)})
        << "\n";
  }
}

}  // namespace progpipe
