// Copyright 2026 The AGED Authors.
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

#ifndef AGED_ERRORS_H_
#define AGED_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aged {

// Bad user input: malformed files, unknown names, invalid configuration.
// The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A validation error tied to a line of an input file (1-based).
class DataError : public ValidationError {
 public:
  DataError(const std::string &message, size_t line)
      : ValidationError("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  size_t line() const { return line_; }

 private:
  size_t line_;
};

// Predictions and gold do not line up; index is 0-based.
class AlignmentError : public ValidationError {
 public:
  AlignmentError(const std::string &message, size_t index)
      : ValidationError(message), index_(index) {}

  size_t index() const { return index_; }

 private:
  size_t index_;
};

// Failures during long-running work (non-finite loss, I/O while training).
// The CLI maps these to exit code 2.
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aged

#endif  // AGED_ERRORS_H_
