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

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qrelx::text {

/// Replaces every invalid UTF-8 sequence with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

/// Reads one line, strips a trailing CR and repairs invalid UTF-8.
bool read_line(std::istream& in, std::string& line);

std::string_view trim(std::string_view s) noexcept;

/// Splits on runs of ASCII whitespace.
std::vector<std::string_view> split_ws(std::string_view s);

bool is_blank(std::string_view s) noexcept;

/// Strict integer / real conversion of the whole field.
std::optional<long long> to_int(std::string_view s) noexcept;
std::optional<double> to_real(std::string_view s) noexcept;

/// Decodes one code point starting at `pos` (which is advanced). Input is
/// assumed to be valid UTF-8 (see sanitize_utf8).
char32_t decode_utf8(std::string_view s, std::size_t& pos) noexcept;
void append_utf8(std::string& out, char32_t cp);

}  // namespace qrelx::text
