// Copyright 2026 The VICTR Authors.
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

#ifndef VICTR_ERROR_H_
#define VICTR_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace victr {

// Bad or missing input: malformed files, unknown ids, violated
// preconditions on caller-supplied data.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string &what) : std::runtime_error(what) {}
};

// Syntax error in a text input, carrying the 1-based line number.
class ParseError : public InputError {
 public:
  ParseError(const std::string &source, size_t line, const std::string &what)
      : InputError(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  size_t line() const { return line_; }

 private:
  size_t line_;
};

// An internal invariant did not hold (weight sums, NaN losses, ...).
class InvariantError : public std::runtime_error {
 public:
  explicit InvariantError(const std::string &what)
      : std::runtime_error(what) {}
};

}  // namespace victr

#endif  // VICTR_ERROR_H_
