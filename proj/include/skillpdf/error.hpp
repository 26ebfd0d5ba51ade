// Copyright 2026 The skillpdf Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skillpdf {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The empirical stochastic matrix has a negative diagonal entry, i.e. the
// scaled win fractions of some row add up to more than one.
class RowStochasticityError : public Error {
 public:
  RowStochasticityError(std::size_t row, double deficit)
      : Error("row " + std::to_string(row) +
              " is not stochastic (diagonal deficit " +
              std::to_string(deficit) + ")"),
        row_(row),
        deficit_(deficit) {}

  std::size_t row() const noexcept { return row_; }
  double deficit() const noexcept { return deficit_; }

 private:
  std::size_t row_;
  double deficit_;
};

// The comparison graph splits into several components, so skills of
// different components cannot be compared.
class DisconnectedGraphError : public Error {
 public:
  explicit DisconnectedGraphError(std::size_t components)
      : Error("comparison graph is disconnected (" +
              std::to_string(components) + " components)"),
        components_(components) {}

  std::size_t components() const noexcept { return components_; }

 private:
  std::size_t components_;
};

// Malformed match input.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Input parses but carries too little information to estimate anything.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// A density estimate vanishes wherever it is needed (e.g. at every
// resubstitution point).
class DegenerateEstimateError : public Error {
 public:
  using Error::Error;
};

}  // namespace skillpdf
