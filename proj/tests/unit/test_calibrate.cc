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

#include "progpipe/calibrate.h"
#include "progpipe/random.h"
#include "test_util.h"

namespace progpipe {
namespace {

TEST(Calibrate, NoneIsIdentity) {
  const Calibrator c = fit_calibrator(CalibratorType::kNone, std::vector<double>{0.2, 0.9},
                                      std::vector<double>{0, 0});
  for (double s : {-1.0, 0.0, 0.37, 2.0}) EXPECT_EQ(c.apply(s), s);
}

TEST(Calibrate, PlattIdentityParameters) {
  const Calibrator c = Calibrator::platt(1.0, 0.0);
  EXPECT_DOUBLE_EQ(c.apply(0.0), 0.5);
  EXPECT_NEAR(c.apply(2.0), 1.0 / (1.0 + std::exp(-2.0)), 1e-15);
}

TEST(Calibrate, PoolAdjacentViolatorsHandOracle) {
  const std::vector<double> s{0.1, 0.2, 0.3, 0.4};
  const std::vector<double> y{0, 1, 0, 1};
  const Calibrator c = fit_calibrator(CalibratorType::kIsotonic, s, y);
  EXPECT_EQ(c.breakpoints(), (std::vector<double>{0.1, 0.2, 0.4}));
  EXPECT_EQ(c.values(), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_DOUBLE_EQ(c.apply(0.1), 0.0);
  EXPECT_DOUBLE_EQ(c.apply(0.25), 0.5);
  EXPECT_DOUBLE_EQ(c.apply(0.35), 0.5);
  EXPECT_DOUBLE_EQ(c.apply(0.4), 1.0);
}

TEST(Calibrate, IsotonicExtrapolatesFlat) {
  const Calibrator c = fit_calibrator(CalibratorType::kIsotonic,
                                      std::vector<double>{0.1, 0.2, 0.3, 0.4},
                                      std::vector<double>{0, 1, 0, 1});
  EXPECT_DOUBLE_EQ(c.apply(-100.0), 0.0);
  EXPECT_DOUBLE_EQ(c.apply(100.0), 1.0);
}

TEST(Calibrate, TiedScoresArePooled) {
  const Calibrator c = fit_calibrator(CalibratorType::kIsotonic,
                                      std::vector<double>{0.5, 0.5, 0.5, 0.9},
                                      std::vector<double>{1, 0, 0, 1});
  EXPECT_NEAR(c.apply(0.5), 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(c.apply(0.9), 1.0);
}

TEST(Calibrate, FittedMapsAreMonotone) {
  Rng rng(17);
  std::vector<double> s(400), y(400);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = rng.uniform();
    y[i] = rng.bernoulli(s[i] * s[i]) ? 1.0 : 0.0;
  }
  for (auto type : {CalibratorType::kPlatt, CalibratorType::kIsotonic}) {
    const Calibrator c = fit_calibrator(type, s, y);
    double prev = -1.0;
    for (int q = 0; q <= 1000; ++q) {
      const double v = c.apply(-0.2 + 1.4 * q / 1000.0);
      EXPECT_GE(v, prev);
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
      prev = v;
    }
  }
}

TEST(Calibrate, PlattRecoversLogisticLink) {
  Rng rng(3);
  std::vector<double> s(20000), y(20000);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = rng.normal();
    y[i] = rng.bernoulli(1.0 / (1.0 + std::exp(-(2.0 * s[i] - 0.5)))) ? 1.0 : 0.0;
  }
  const Calibrator c = fit_calibrator(CalibratorType::kPlatt, s, y);
  EXPECT_NEAR(c.a(), 2.0, 0.1);
  EXPECT_NEAR(c.b(), -0.5, 0.1);
}

TEST(Calibrate, Errors) {
  EXPECT_PROGPIPE_ERROR(fit_calibrator(CalibratorType::kIsotonic, std::vector<double>{0.1, 0.2},
                                       std::vector<double>{1, 1}),
                        ErrorCode::kSingleClass);
  EXPECT_PROGPIPE_ERROR(fit_calibrator(CalibratorType::kPlatt, std::vector<double>{0.1},
                                       std::vector<double>{1, 0}),
                        ErrorCode::kLengthMismatch);
  EXPECT_PROGPIPE_ERROR(Calibrator::isotonic({0.2, 0.1}, {0.0, 1.0}), ErrorCode::kSpecInvalid);
  EXPECT_PROGPIPE_ERROR(parse_calibrator("beta"), ErrorCode::kSpecInvalid);
  EXPECT_EQ(parse_calibrator("sigmoid"), CalibratorType::kPlatt);
}

TEST(Calibrate, JsonRoundTrip) {
  const Calibrator iso = Calibrator::isotonic({0.1, 0.3}, {0.2, 0.7});
  const Calibrator back = Calibrator::from_json(iso.to_json());
  EXPECT_EQ(back.breakpoints(), iso.breakpoints());
  EXPECT_EQ(back.values(), iso.values());
  const Calibrator pl = Calibrator::from_json(Calibrator::platt(1.5, -0.2).to_json());
  EXPECT_EQ(pl.type(), CalibratorType::kPlatt);
  EXPECT_EQ(pl.a(), 1.5);
  EXPECT_EQ(pl.b(), -0.2);
}

}  // namespace
}  // namespace progpipe
