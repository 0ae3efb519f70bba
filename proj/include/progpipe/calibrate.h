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

#ifndef PROGPIPE_CALIBRATE_H_
#define PROGPIPE_CALIBRATE_H_

// Post-hoc probability calibration: identity, Platt scaling and isotonic
// regression.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace progpipe {

enum class CalibratorType { kNone, kPlatt, kIsotonic };

std::string_view to_string(CalibratorType type);
CalibratorType parse_calibrator(std::string_view text);

class Calibrator {
 public:
  Calibrator() = default;
  static Calibrator platt(double a, double b);
  // Breakpoints strictly increasing, values non-decreasing.
  static Calibrator isotonic(std::vector<double> breakpoints, std::vector<double> values);

  CalibratorType type() const { return type_; }
  double a() const { return a_; }
  double b() const { return b_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }

  // none: s. platt: 1 / (1 + exp(-(a s + b))). isotonic: value of the last
  // breakpoint <= s, flat beyond either end.
  double apply(double score) const;
  std::vector<double> apply(std::span<const double> scores) const;

  nlohmann::json to_json() const;
  static Calibrator from_json(const nlohmann::json& doc);

 private:
  CalibratorType type_ = CalibratorType::kNone;
  double a_ = 1.0;
  double b_ = 0.0;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

// Labels are 0/1. Platt and isotonic throw kSingleClass unless both classes
// are present; all kinds throw kLengthMismatch on misaligned input.
Calibrator fit_calibrator(CalibratorType type, std::span<const double> scores,
                          std::span<const double> labels);

}  // namespace progpipe

#endif  // PROGPIPE_CALIBRATE_H_
