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

#ifndef PROGPIPE_SYNTHGEN_H_
#define PROGPIPE_SYNTHGEN_H_

// Synthetic wound-level and episode-level cohorts with configurable marginal
// statistics and a planted, documented label mechanism.
//
// Episode labels: r = logistic(offset + gamma * (wounds - mean wounds) +
// sum_j weight_j * (x_j - center_j) / scale_j + xor_weight * (xor - 0.5)),
// where xor = [PtAge > 75] != [AvgBMI > 30]. The offset and gamma are solved
// by bisection so the expected episode-level and wound-weighted re-admit
// rates equal the requested rates. Wound rows inherit their episode's category
// and weeks labels; the recurrence label has its own wound-level score.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "progpipe/dataset.h"

namespace progpipe {

struct CohortSpec {
  int n_wound_rows = 90328;
  int n_episode_rows = 45261;
  double recurrence_rate = 24886.0 / 90328.0;
  double readmit_rate_wound = 46620.0 / 90328.0;
  double readmit_rate_episode = 21521.0 / 45261.0;
  double age_mean = 75.0;
  double age_min = 13.0;
  double age_max = 110.0;
  double weeks_min = 1.0;
  double weeks_max = 15.0;
  double weeks_mean = 6.0;
  // Pareto exponent of the weeks-to-readmit noise; <= 0 uses the built-in
  // default.
  double weeks_shape = 0.0;
  double missing_rate = 0.05;
  // Strength of the non-additive age x BMI term in the episode risk score.
  double xor_weight = 1.6;
  std::uint64_t seed = 0;

  // Throws kSpecInvalid.
  void validate() const;
};

CohortSpec default_spec();
nlohmann::json spec_to_json(const CohortSpec& spec);
// Missing keys keep their default_spec() values.
CohortSpec spec_from_json(const nlohmann::json& doc);

// One term of a planted linear score, on a standardized feature.
struct PlantedWeight {
  std::string feature;
  double center;
  double scale;
  double weight;
};

// Fixed weight vectors shipped with the generator.
const std::vector<PlantedWeight>& episode_risk_weights();
const std::vector<PlantedWeight>& recurrence_weights();
// Comorbidity flags summed into the derived "ComorbidityCount" term.
const std::vector<std::string>& comorbidity_flags();
const std::vector<std::string>& noncompliance_columns();

// The calibrated label model of one generated cohort. Scores are computed
// from complete (pre-missingness) feature values.
struct EpisodeRiskModel {
  double offset = 0.0;
  double wound_count_weight = 0.0;
  double mean_wound_count = 0.0;
  double xor_weight = 0.0;

  double score(const Schema& schema, const std::vector<Cell>& values) const;
  double risk(const Schema& schema, const std::vector<Cell>& values) const;
};

struct RecurrenceModel {
  double offset = 0.0;
  double interaction_weight = 1.0;

  double score(const Schema& schema, const std::vector<Cell>& values) const;
};

struct SynthCohorts {
  Cohort wound;
  Cohort episode;
  EpisodeRiskModel episode_model;
  RecurrenceModel recurrence_model;
  double weeks_exponent = 0.0;
  // Multiplier solved so the clamped, rounded weeks average weeks_mean.
  double weeks_scale = 0.0;
};

Schema wound_schema();
Schema episode_schema();

SynthCohorts generate(const CohortSpec& spec);

// Episode-level features ordered by planted effect size
// (|weight| plus half the xor weight credited to each of PtAge and AvgBMI),
// ties broken by name. ComorbidityCount is spread over 16 flags and is not
// a column, so it is left out.
std::vector<std::string> planted_feature_ranking(const CohortSpec& spec);

// Plot-ready histogram rows: label,column,value,class_negative,class_positive,
// where label names the outcome the counts are split by.
void write_histograms(const SynthCohorts& cohorts, std::ostream& out);

}  // namespace progpipe

#endif  // PROGPIPE_SYNTHGEN_H_
