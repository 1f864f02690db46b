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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qrelx {

/// Malformed or inconsistent input data (exit code 2 at the CLI).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in a line-oriented input. `line()` is 1-based, 0 when unknown.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : DataError(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The same (query, document) pair judged twice, or a doc listed twice in a run.
class DuplicateError : public DataError {
 public:
  using DataError::DataError;
};

/// A quantity that is mathematically undefined for the given input (exit code 3).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qrelx
