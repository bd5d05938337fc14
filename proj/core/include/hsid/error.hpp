// Copyright 2026 The hsid Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HSID_ERROR_HPP_
#define HSID_ERROR_HPP_

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsid {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller supplied an argument that violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A regression matrix lost column rank. Carries the numerical rank and the
// labels of the columns found to be linearly dependent on the others.
class RankDeficientError : public Error {
 public:
  RankDeficientError(const std::string& what, std::size_t rank,
                     std::size_t columns, std::vector<std::string> offending)
      : Error(what),
        rank_(rank),
        columns_(columns),
        offending_(std::move(offending)) {}

  std::size_t rank() const { return rank_; }
  std::size_t columns() const { return columns_; }
  const std::vector<std::string>& offending_columns() const {
    return offending_;
  }

 private:
  std::size_t rank_;
  std::size_t columns_;
  std::vector<std::string> offending_;
};

// The Schur complement of an appended column block is numerically singular,
// i.e. the new columns lie in the span of the existing ones.
class SingularAugmentationError : public Error {
 public:
  using Error::Error;
};

// Text input could not be parsed. `line()` is 1-based; 0 when the failure is
// not attached to a particular line (e.g. an empty file).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Receives non-fatal diagnostics. The default sink writes to stderr.
using WarningSink = std::function<void(const std::string&)>;

WarningSink stderr_warning_sink();

}  // namespace hsid

#endif  // HSID_ERROR_HPP_
