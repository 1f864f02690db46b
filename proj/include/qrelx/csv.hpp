// Copyright 2026 The qrelx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <initializer_list>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

// Minimal RFC-4180 helpers. Output always uses LF line endings.
namespace qrelx::csv {

/// Fixed 9-decimal formatting; negative zero prints as 0.000000000.
std::string real(double v);

/// Quotes the field when it contains a comma, quote, CR or LF.
std::string field(std::string_view s);

std::string row(std::initializer_list<std::string_view> fields);

/// Reads one record (which may span lines inside quotes). Returns false at EOF.
bool read_row(std::istream& in, std::vector<std::string>& fields);

}  // namespace qrelx::csv
