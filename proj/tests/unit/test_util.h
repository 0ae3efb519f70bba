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

#ifndef PROGPIPE_TESTS_TEST_UTIL_H_
#define PROGPIPE_TESTS_TEST_UTIL_H_

#include <gtest/gtest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "progpipe/dataset.h"
#include "progpipe/error.h"

namespace progpipe::testing {

// Asserts that `statement` throws progpipe::Error with the given code.
#define EXPECT_PROGPIPE_ERROR(statement, error_code)                    \
  do {                                                                  \
    try {                                                               \
      statement;                                                        \
      ADD_FAILURE() << "expected " #error_code;                         \
    } catch (const ::progpipe::Error& e) {                              \
      EXPECT_EQ(e.code(), error_code) << e.what();                      \
    }                                                                   \
  } while (0)

inline Schema make_schema(std::vector<Column> columns) {
  Schema schema;
  schema.columns = std::move(columns);
  schema.date_filter.reset();
  return schema;
}

inline PatientRecord make_record(std::string patient, int episode, std::vector<Cell> values) {
  PatientRecord rec;
  rec.patient_id = std::move(patient);
  rec.episode_number = episode;
  rec.values = std::move(values);
  return rec;
}

inline Cell num(double v) { return Cell::number(v); }
inline Cell cat(std::string v) { return Cell::category(std::move(v)); }
inline Cell na() { return Cell::missing(); }

// Fresh scratch directory under the system temp dir.
inline std::string scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("progpipe_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace progpipe::testing

#endif  // PROGPIPE_TESTS_TEST_UTIL_H_
