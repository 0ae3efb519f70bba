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

#include "progpipe/preprocess.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "progpipe/csv.h"
#include "progpipe/error.h"

namespace progpipe {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_categorical(const Column& column) {
  return column.kind == FeatureKind::kCategorical;
}

// Most frequent string; ties go to the lexicographically smallest.
std::string mode_of(const std::map<std::string, std::size_t>& counts) {
  std::string best;
  std::size_t best_count = 0;
  for (const auto& [value, count] : counts) {
    if (count > best_count) {
      best = value;
      best_count = count;
    }
  }
  return best;
}

double mean_of(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Most frequent number; ties go to the smallest.
double numeric_mode(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  std::map<double, std::size_t> counts;
  for (double v : values) ++counts[v];
  double best = counts.begin()->first;
  std::size_t best_count = 0;
  for (const auto& [value, count] : counts) {
    if (count > best_count) {
      best = value;
      best_count = count;
    }
  }
  return best;
}

}  // namespace

std::string ImputerKind::name() const {
  switch (type) {
    case ImputerType::kMean: return "mean";
    case ImputerType::kMedian: return "median";
    case ImputerType::kMostFrequent: return "most-frequent";
    case ImputerType::kConstant: return "constant(" + csv::format_double(constant) + ")";
    case ImputerType::kKnn: return "knn(" + std::to_string(k) + ")";
  }
  return "mean";
}

std::string ProcessorKind::name() const {
  switch (type) {
    case ProcessorType::kIdentity: return "identity";
    case ProcessorType::kStandardize: return "standardize";
    case ProcessorType::kMinMax: return "min-max";
    case ProcessorType::kOneHot: return "one-hot";
    case ProcessorType::kOneHotStandardize: return "one-hot+standardize";
    case ProcessorType::kVarianceThreshold:
      return "variance-threshold(" + csv::format_double(threshold) + ")";
    case ProcessorType::kTopKMutualInformation:
      return "top-k-mi(" + std::to_string(top_k) + ")";
  }
  return "identity";
}

nlohmann::json to_json(const ImputerKind& kind) {
  nlohmann::json doc;
  switch (kind.type) {
    case ImputerType::kMean: doc["kind"] = "mean"; break;
    case ImputerType::kMedian: doc["kind"] = "median"; break;
    case ImputerType::kMostFrequent: doc["kind"] = "most-frequent"; break;
    case ImputerType::kConstant:
      doc["kind"] = "constant";
      doc["value"] = kind.constant;
      break;
    case ImputerType::kKnn:
      doc["kind"] = "knn";
      doc["k"] = kind.k;
      break;
  }
  return doc;
}

ImputerKind imputer_kind_from_json(const nlohmann::json& doc) {
  ImputerKind kind;
  const std::string name =
      doc.is_string() ? doc.get<std::string>() : doc.at("kind").get<std::string>();
  if (name == "mean") kind.type = ImputerType::kMean;
  else if (name == "median") kind.type = ImputerType::kMedian;
  else if (name == "most-frequent") kind.type = ImputerType::kMostFrequent;
  else if (name == "constant") {
    kind.type = ImputerType::kConstant;
    if (doc.is_object()) kind.constant = doc.value("value", 0.0);
  } else if (name == "knn") {
    kind.type = ImputerType::kKnn;
    if (doc.is_object()) kind.k = doc.value("k", 5);
    check(kind.k >= 1, ErrorCode::kSpecInvalid, "knn imputer needs k >= 1");
  } else {
    fail(ErrorCode::kSpecInvalid, "unknown imputer '" + name + "'");
  }
  return kind;
}

nlohmann::json to_json(const ProcessorKind& kind) {
  nlohmann::json doc;
  switch (kind.type) {
    case ProcessorType::kIdentity: doc["kind"] = "identity"; break;
    case ProcessorType::kStandardize: doc["kind"] = "standardize"; break;
    case ProcessorType::kMinMax: doc["kind"] = "min-max"; break;
    case ProcessorType::kOneHot: doc["kind"] = "one-hot"; break;
    case ProcessorType::kOneHotStandardize: doc["kind"] = "one-hot+standardize"; break;
    case ProcessorType::kVarianceThreshold:
      doc["kind"] = "variance-threshold";
      doc["t"] = kind.threshold;
      break;
    case ProcessorType::kTopKMutualInformation:
      doc["kind"] = "top-k-mi";
      doc["k"] = kind.top_k;
      break;
  }
  return doc;
}

ProcessorKind processor_kind_from_json(const nlohmann::json& doc) {
  ProcessorKind kind;
  const std::string name =
      doc.is_string() ? doc.get<std::string>() : doc.at("kind").get<std::string>();
  if (name == "identity") kind.type = ProcessorType::kIdentity;
  else if (name == "standardize") kind.type = ProcessorType::kStandardize;
  else if (name == "min-max") kind.type = ProcessorType::kMinMax;
  else if (name == "one-hot") kind.type = ProcessorType::kOneHot;
  else if (name == "one-hot+standardize") kind.type = ProcessorType::kOneHotStandardize;
  else if (name == "variance-threshold") {
    kind.type = ProcessorType::kVarianceThreshold;
    if (doc.is_object()) kind.threshold = doc.value("t", 0.0);
    check(kind.threshold >= 0.0, ErrorCode::kSpecInvalid,
          "variance threshold must be >= 0");
  } else if (name == "top-k-mi" || name == "top-k-mutual-information") {
    kind.type = ProcessorType::kTopKMutualInformation;
    if (doc.is_object()) kind.top_k = doc.value("k", 10);
    check(kind.top_k >= 1, ErrorCode::kSpecInvalid, "top-k needs k >= 1");
  } else {
    fail(ErrorCode::kSpecInvalid, "unknown processor '" + name + "'");
  }
  return kind;
}

// ---------------------------------------------------------------------------
// Imputation

FittedImputer fit_imputer(const ImputerKind& kind, const Cohort& train) {
  check(!train.empty(), ErrorCode::kEmptyCohort, "cannot fit an imputer on no rows");
  FittedImputer fitted;
  fitted.kind_ = kind;
  fitted.schema_ = train.schema;
  const auto& columns = train.schema.columns;
  fitted.fill_.resize(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (is_categorical(columns[c])) {
      std::map<std::string, std::size_t> counts;
      for (const auto& rec : train.records) {
        if (rec.values[c].is_category()) ++counts[rec.values[c].as_category()];
      }
      std::string fill;
      if (kind.type == ImputerType::kConstant || counts.empty()) {
        fill = std::string(kUnknownCategory);
      } else {
        fill = mode_of(counts);
      }
      fitted.fill_[c] = Cell::category(std::move(fill));
      continue;
    }
    std::vector<double> observed;
    for (const auto& rec : train.records) {
      if (rec.values[c].is_number()) observed.push_back(rec.values[c].as_number());
    }
    double fill = 0.0;
    switch (kind.type) {
      case ImputerType::kMean:
      case ImputerType::kKnn: fill = mean_of(observed); break;
      case ImputerType::kMedian: fill = median_of(observed); break;
      case ImputerType::kMostFrequent: fill = numeric_mode(observed); break;
      case ImputerType::kConstant: fill = kind.constant; break;
    }
    fitted.fill_[c] = Cell::number(fill);
  }

  if (kind.type == ImputerType::kKnn) {
    const std::size_t n = train.size();
    const std::size_t stride =
        (n + FittedImputer::kMaxKnnReference - 1) / FittedImputer::kMaxKnnReference;
    for (std::size_t r = 0; r < n; r += stride) {
      const auto& rec = train.records[r];
      for (std::size_t c = 0; c < columns.size(); ++c) {
        const Cell& cell = rec.values[c];
        fitted.ref_numeric_.push_back(cell.is_number() ? cell.as_number() : kNaN);
        fitted.ref_category_.push_back(cell.is_category() ? cell.as_category() : "");
      }
      ++fitted.ref_rows_;
    }
  }
  return fitted;
}

Cell FittedImputer::knn_fill(const std::vector<Cell>& row, std::size_t column,
                             const std::vector<double>& distances,
                             const std::vector<bool>& comparable) const {
  (void)row;
  const std::size_t width = schema_.columns.size();
  const bool categorical = is_categorical(schema_.columns[column]);
  std::vector<std::pair<double, std::size_t>> candidates;
  for (std::size_t j = 0; j < ref_rows_; ++j) {
    if (!comparable[j]) continue;
    const bool observed = categorical ? !ref_category_[j * width + column].empty()
                                      : !std::isnan(ref_numeric_[j * width + column]);
    if (observed) candidates.emplace_back(distances[j], j);
  }
  if (candidates.empty()) return fill_[column];
  const std::size_t k =
      std::min<std::size_t>(static_cast<std::size_t>(kind_.k), candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + k, candidates.end());
  if (categorical) {
    std::map<std::string, std::size_t> counts;
    for (std::size_t i = 0; i < k; ++i) {
      ++counts[ref_category_[candidates[i].second * width + column]];
    }
    return Cell::category(mode_of(counts));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    total += ref_numeric_[candidates[i].second * width + column];
  }
  return Cell::number(total / static_cast<double>(k));
}

Cohort FittedImputer::apply(const Cohort& cohort) const {
  require_same_columns(schema_, cohort.schema);
  Cohort out = cohort;
  const std::size_t width = schema_.columns.size();
  std::size_t numeric_width = 0;
  for (const auto& c : schema_.columns) numeric_width += is_categorical(c) ? 0 : 1;
  std::vector<double> distances(ref_rows_);
  std::vector<bool> comparable(ref_rows_);
  for (auto& rec : out.records) {
    bool any_missing = false;
    for (const Cell& cell : rec.values) any_missing |= cell.is_missing();
    if (!any_missing) continue;
    if (kind_.type != ImputerType::kKnn) {
      for (std::size_t c = 0; c < width; ++c) {
        if (rec.values[c].is_missing()) rec.values[c] = fill_[c];
      }
      continue;
    }
    // Euclidean distance over numeric columns observed in both rows,
    // rescaled by (numeric columns / shared columns).
    for (std::size_t j = 0; j < ref_rows_; ++j) {
      double sum = 0.0;
      std::size_t shared = 0;
      for (std::size_t c = 0; c < width; ++c) {
        if (!rec.values[c].is_number()) continue;
        const double ref = ref_numeric_[j * width + c];
        if (std::isnan(ref)) continue;
        const double d = rec.values[c].as_number() - ref;
        sum += d * d;
        ++shared;
      }
      comparable[j] = shared > 0;
      distances[j] = shared > 0 ? std::sqrt(sum * static_cast<double>(numeric_width) /
                                            static_cast<double>(shared))
                                : 0.0;
    }
    const std::vector<Cell> original = rec.values;
    for (std::size_t c = 0; c < width; ++c) {
      if (original[c].is_missing()) {
        rec.values[c] = knn_fill(original, c, distances, comparable);
      }
    }
  }
  return out;
}

namespace {

nlohmann::json cell_to_json(const Cell& cell) {
  if (cell.is_missing()) return nullptr;
  if (cell.is_category()) return cell.as_category();
  return cell.as_number();
}

Cell cell_from_json(const nlohmann::json& doc) {
  if (doc.is_null()) return Cell::missing();
  if (doc.is_string()) return Cell::category(doc.get<std::string>());
  return Cell::number(doc.get<double>());
}

}  // namespace

nlohmann::json FittedImputer::to_json() const {
  nlohmann::json doc;
  doc["kind"] = progpipe::to_json(kind_);
  doc["schema"] = schema_to_json(schema_);
  nlohmann::json fill = nlohmann::json::array();
  for (const Cell& cell : fill_) fill.push_back(cell_to_json(cell));
  doc["fill"] = std::move(fill);
  if (kind_.type == ImputerType::kKnn) {
    nlohmann::json numeric = nlohmann::json::array();
    for (double v : ref_numeric_) numeric.push_back(std::isnan(v) ? nlohmann::json() : nlohmann::json(v));
    doc["ref_rows"] = ref_rows_;
    doc["ref_numeric"] = std::move(numeric);
    doc["ref_category"] = ref_category_;
  }
  return doc;
}

FittedImputer FittedImputer::from_json(const nlohmann::json& doc) {
  FittedImputer out;
  out.kind_ = imputer_kind_from_json(doc.at("kind"));
  out.schema_ = schema_from_json(doc.at("schema"));
  for (const auto& cell : doc.at("fill")) out.fill_.push_back(cell_from_json(cell));
  if (out.kind_.type == ImputerType::kKnn) {
    out.ref_rows_ = doc.at("ref_rows").get<std::size_t>();
    for (const auto& v : doc.at("ref_numeric")) {
      out.ref_numeric_.push_back(v.is_null() ? kNaN : v.get<double>());
    }
    out.ref_category_ = doc.at("ref_category").get<std::vector<std::string>>();
  }
  check(out.fill_.size() == out.schema_.columns.size(), ErrorCode::kSchemaMismatch,
        "imputer fill values do not match its schema");
  return out;
}

// ---------------------------------------------------------------------------
// Feature processing

std::vector<int> equal_frequency_bins(std::span<const double> values, int bins) {
  std::vector<double> sorted;
  for (double v : values) {
    if (!std::isnan(v)) sorted.push_back(v);
  }
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> cuts;
  if (!sorted.empty()) {
    for (int b = 1; b < bins; ++b) {
      const std::size_t pos = sorted.size() * static_cast<std::size_t>(b) /
                              static_cast<std::size_t>(bins);
      if (pos == 0 || pos >= sorted.size()) continue;
      // Cut below sorted[pos]; equal values share a bin.
      const double cut = sorted[pos];
      if (sorted.front() < cut && (cuts.empty() || cuts.back() < cut)) cuts.push_back(cut);
    }
  }
  std::vector<int> codes(values.size(), -1);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i])) continue;
    codes[i] = static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), values[i]) -
                                cuts.begin());
    // upper_bound puts a value equal to a cut into the bin above it.
  }
  return codes;
}

double mutual_information(std::span<const int> x, std::span<const int> y) {
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> px, py;
  double n = 0.0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] < 0 || y[i] < 0) continue;
    joint[{x[i], y[i]}] += 1.0;
    px[x[i]] += 1.0;
    py[y[i]] += 1.0;
    n += 1.0;
  }
  if (n == 0.0) return 0.0;
  double mi = 0.0;
  for (const auto& [key, count] : joint) {
    const double pxy = count / n;
    mi += pxy * std::log(pxy / ((px[key.first] / n) * (py[key.second] / n)));
  }
  return std::max(0.0, mi);
}

namespace {

constexpr int kMutualInformationBins = 8;

double output_value(const OutputFeature& f, const Cell& cell) {
  if (f.one_hot) {
    return cell.is_category() && cell.as_category() == f.category ? 1.0 : 0.0;
  }
  if (!cell.is_number()) return kNaN;
  return (cell.as_number() - f.shift) / f.scale;
}

std::vector<double> column_values(const Cohort& cohort, const OutputFeature& f) {
  std::vector<double> out(cohort.size());
  for (std::size_t r = 0; r < cohort.size(); ++r) {
    out[r] = output_value(f, cohort.records[r].values[f.source]);
  }
  return out;
}

void moments(const std::vector<double>& values, double& mean, double& variance) {
  double total = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    total += v;
    ++n;
  }
  mean = n > 0 ? total / static_cast<double>(n) : 0.0;
  double ss = 0.0;
  for (double v : values) {
    if (!std::isnan(v)) ss += (v - mean) * (v - mean);
  }
  variance = n > 0 ? ss / static_cast<double>(n) : 0.0;
}

}  // namespace

FittedProcessor fit_processor(const ProcessorKind& kind, const Cohort& train,
                              std::span<const double> target) {
  check(!train.empty(), ErrorCode::kEmptyCohort, "cannot fit a processor on no rows");
  FittedProcessor fitted;
  fitted.kind_ = kind;
  fitted.schema_ = train.schema;
  const auto& columns = train.schema.columns;
  const bool with_categories = kind.type != ProcessorType::kIdentity &&
                               kind.type != ProcessorType::kStandardize &&
                               kind.type != ProcessorType::kMinMax;
  const bool standardize = kind.type == ProcessorType::kStandardize ||
                           kind.type == ProcessorType::kOneHotStandardize;

  std::vector<OutputFeature> base;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (is_categorical(columns[c])) {
      if (!with_categories) continue;
      std::set<std::string> categories;
      for (const auto& rec : train.records) {
        if (rec.values[c].is_category()) categories.insert(rec.values[c].as_category());
      }
      for (const auto& category : categories) {
        OutputFeature f;
        f.name = columns[c].name + "=" + category;
        f.source = c;
        f.one_hot = true;
        f.category = category;
        base.push_back(std::move(f));
      }
      continue;
    }
    OutputFeature f;
    f.name = columns[c].name;
    f.source = c;
    if (standardize || kind.type == ProcessorType::kMinMax) {
      const std::vector<double> values = column_values(train, f);
      if (standardize) {
        double mean = 0.0, variance = 0.0;
        moments(values, mean, variance);
        f.shift = mean;
        f.scale = variance > 0.0 ? std::sqrt(variance) : 1.0;
      } else {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (double v : values) {
          if (std::isnan(v)) continue;
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        if (lo > hi) lo = hi = 0.0;
        f.shift = lo;
        f.scale = hi > lo ? hi - lo : 1.0;
      }
    }
    base.push_back(std::move(f));
  }

  if (kind.type == ProcessorType::kVarianceThreshold) {
    std::vector<OutputFeature> kept;
    std::size_t best = 0;
    double best_variance = -1.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
      double mean = 0.0, variance = 0.0;
      moments(column_values(train, base[i]), mean, variance);
      if (variance >= kind.threshold) kept.push_back(base[i]);
      if (variance > best_variance) {
        best_variance = variance;
        best = i;
      }
    }
    if (kept.empty() && !base.empty()) kept.push_back(base[best]);
    base = std::move(kept);
  } else if (kind.type == ProcessorType::kTopKMutualInformation &&
             static_cast<std::size_t>(kind.top_k) < base.size()) {
    check(target.size() == train.size(), ErrorCode::kDimensionMismatch,
          "top-k mutual information needs one target per training row");
    std::vector<int> target_codes;
    bool binary = true;
    for (double t : target) binary &= (t == 0.0 || t == 1.0);
    if (binary) {
      for (double t : target) target_codes.push_back(static_cast<int>(t));
    } else {
      target_codes = equal_frequency_bins(target, kMutualInformationBins);
    }
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t i = 0; i < base.size(); ++i) {
      const std::vector<double> values = column_values(train, base[i]);
      const std::vector<int> codes = equal_frequency_bins(values, kMutualInformationBins);
      scored.emplace_back(mutual_information(codes, target_codes), i);
    }
    std::sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return base[a.second].name < base[b.second].name;
    });
    std::vector<std::size_t> keep;
    for (int i = 0; i < kind.top_k; ++i) keep.push_back(scored[i].second);
    std::sort(keep.begin(), keep.end());
    std::vector<OutputFeature> kept;
    for (std::size_t i : keep) kept.push_back(base[i]);
    base = std::move(kept);
  }
  fitted.features_ = std::move(base);
  return fitted;
}

std::vector<std::string> FittedProcessor::feature_names() const {
  std::vector<std::string> names;
  for (const auto& f : features_) names.push_back(f.name);
  return names;
}

Matrix FittedProcessor::apply(const Cohort& cohort) const {
  require_same_columns(schema_, cohort.schema);
  Matrix out(cohort.size(), features_.size());
  for (std::size_t r = 0; r < cohort.size(); ++r) {
    const auto& values = cohort.records[r].values;
    auto row = out.row(r);
    for (std::size_t i = 0; i < features_.size(); ++i) {
      row[i] = output_value(features_[i], values[features_[i].source]);
    }
  }
  return out;
}

nlohmann::json FittedProcessor::to_json() const {
  nlohmann::json doc;
  doc["kind"] = progpipe::to_json(kind_);
  doc["schema"] = schema_to_json(schema_);
  nlohmann::json features = nlohmann::json::array();
  for (const auto& f : features_) {
    nlohmann::json entry = {{"name", f.name}, {"source", f.source}};
    if (f.one_hot) {
      entry["category"] = f.category;
    } else {
      entry["shift"] = f.shift;
      entry["scale"] = f.scale;
    }
    features.push_back(std::move(entry));
  }
  doc["features"] = std::move(features);
  return doc;
}

FittedProcessor FittedProcessor::from_json(const nlohmann::json& doc) {
  FittedProcessor out;
  out.kind_ = processor_kind_from_json(doc.at("kind"));
  out.schema_ = schema_from_json(doc.at("schema"));
  for (const auto& entry : doc.at("features")) {
    OutputFeature f;
    f.name = entry.at("name").get<std::string>();
    f.source = entry.at("source").get<std::size_t>();
    check(f.source < out.schema_.columns.size(), ErrorCode::kSchemaMismatch,
          "processor feature '" + f.name + "' points past its schema");
    if (entry.contains("category")) {
      f.one_hot = true;
      f.category = entry["category"].get<std::string>();
    } else {
      f.shift = entry.value("shift", 0.0);
      f.scale = entry.value("scale", 1.0);
    }
    out.features_.push_back(std::move(f));
  }
  return out;
}

}  // namespace progpipe
