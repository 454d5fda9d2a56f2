/* Copyright 2026 The JLSE Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Small text helpers shared by the dataset, checkpoint and report writers.

#ifndef JLSE_CSV_HPP_
#define JLSE_CSV_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace jlse {

// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);
// Parses a whole field as a double; throws kMalformed otherwise.
double parse_double(std::string_view field);

std::vector<std::string_view> split_fields(std::string_view line, char sep = ',');

std::string read_text_file(const std::string& path);
// Writes via a temporary sibling and rename, so readers never observe a
// half-written file.
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace jlse

#endif  // JLSE_CSV_HPP_
