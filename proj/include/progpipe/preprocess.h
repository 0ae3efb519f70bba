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

#ifndef PROGPIPE_PREPROCESS_H_
#define PROGPIPE_PREPROCESS_H_

// Imputation and feature processing stages. Both follow fit-on-train,
// apply-anywhere: a fitted transform is immutable and reads nothing from
// the data it is applied to beyond the cells being transformed.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "progpipe/dataset.h"
#include "progpipe/matrix.h"

namespace progpipe {

enum class ImputerType { kMean, kMedian, kMostFrequent, kConstant, kKnn };

struct ImputerKind {
  ImputerType type = ImputerType::kMean;
  double constant = 0.0;  // kConstant
  int k = 5;              // kKnn

  // Canonical name, e.g. "mean", "constant(0)", "knn(5)".
  std::string name() const;
  bool operator==(const ImputerKind&) const = default;
};

enum class ProcessorType {
  kIdentity,
  kStandardize,
  kMinMax,
  kOneHot,
  kOneHotStandardize,
  kVarianceThreshold,
  kTopKMutualInformation,
};

struct ProcessorKind {
  ProcessorType type = ProcessorType::kIdentity;
  double threshold = 0.0;  // kVarianceThreshold
  int top_k = 10;          // kTopKMutualInformation

  std::string name() const;
  bool operator==(const ProcessorKind&) const = default;
};

nlohmann::json to_json(const ImputerKind& kind);
ImputerKind imputer_kind_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ProcessorKind& kind);
ProcessorKind processor_kind_from_json(const nlohmann::json& doc);

// Category fill used by constant(value) and when a categorical column was
// never observed.
inline constexpr std::string_view kUnknownCategory = "Unknown";

class FittedImputer {
 public:
  // Reference rows kept for knn lookups; larger training sets are thinned
  // by taking every n-th row.
  static constexpr std::size_t kMaxKnnReference = 1000;

  FittedImputer() = default;

  const ImputerKind& kind() const { return kind_; }
  const Schema& schema() const { return schema_; }
  // Per-column fill used outside knn (and as the knn fallback).
  const std::vector<Cell>& fill_values() const { return fill_; }

  // Returns a cohort with no MISSING cells. Throws kSchemaMismatch.
  Cohort apply(const Cohort& cohort) const;

  nlohmann::json to_json() const;
  static FittedImputer from_json(const nlohmann::json& doc);

 private:
  friend FittedImputer fit_imputer(const ImputerKind&, const Cohort&);

  Cell knn_fill(const std::vector<Cell>& row, std::size_t column,
                const std::vector<double>& distances,
                const std::vector<bool>& comparable) const;

  ImputerKind kind_;
  Schema schema_;
  std::vector<Cell> fill_;
  // knn reference rows: numeric cells (NaN if missing) and categorical
  // cells (empty string if missing), row-major.
  std::vector<double> ref_numeric_;
  std::vector<std::string> ref_category_;
  std::size_t ref_rows_ = 0;
};

// Throws kEmptyCohort.
FittedImputer fit_imputer(const ImputerKind& kind, const Cohort& train);

// One output column of a fitted processor.
struct OutputFeature {
  std::string name;
  std::size_t source = 0;  // schema column index
  bool one_hot = false;
  std::string category;    // one_hot only
  double shift = 0.0;      // output = (x - shift) / scale
  double scale = 1.0;

  bool operator==(const OutputFeature&) const = default;
};

class FittedProcessor {
 public:
  FittedProcessor() = default;

  const ProcessorKind& kind() const { return kind_; }
  const Schema& schema() const { return schema_; }
  const std::vector<OutputFeature>& features() const { return features_; }
  std::vector<std::string> feature_names() const;
  std::size_t output_count() const { return features_.size(); }

  // Dense matrix, one row per record. Unseen categories encode as all
  // zeros; MISSING numeric cells become NaN. Throws kSchemaMismatch.
  Matrix apply(const Cohort& cohort) const;

  nlohmann::json to_json() const;
  static FittedProcessor from_json(const nlohmann::json& doc);

 private:
  friend FittedProcessor fit_processor(const ProcessorKind&, const Cohort&,
                                       std::span<const double>);
  ProcessorKind kind_;
  Schema schema_;
  std::vector<OutputFeature> features_;
};

// `target` is only read by top-k mutual information; it may be empty for
// the other kinds.
FittedProcessor fit_processor(const ProcessorKind& kind, const Cohort& train,
                              std::span<const double> target);

// Equal-frequency bin index of each value (at most `bins` bins, NaN -> -1).
std::vector<int> equal_frequency_bins(std::span<const double> values, int bins);

// Mutual information (nats) between two discrete codes; negative codes are
// ignored.
double mutual_information(std::span<const int> x, std::span<const int> y);

}  // namespace progpipe

#endif  // PROGPIPE_PREPROCESS_H_
