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

#ifndef PROGPIPE_CSV_H_
#define PROGPIPE_CSV_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace progpipe::csv {

// Minimal RFC 4180 reader: comma-delimited, double-quote escaping, no
// embedded newlines inside quoted fields.
std::vector<std::string> split_line(std::string_view line);

// Quotes a field only when it contains a comma, quote, or leading/trailing
// blank.
std::string escape(std::string_view field);

std::string join_line(const std::vector<std::string>& fields);

// Reads one logical line, stripping a trailing '\r'. Returns false at EOF.
bool read_line(std::istream& in, std::string& line);

// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

}  // namespace progpipe::csv

#endif  // PROGPIPE_CSV_H_
