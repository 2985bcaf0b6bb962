// Copyright 2026 The minent Authors
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

#ifndef MINENT_ERRORS_HPP
#define MINENT_ERRORS_HPP

#include <optional>
#include <stdexcept>
#include <string>

namespace minent {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point violates the hyperboloid constraint or a pairing is out of range.
class InvalidPoint : public Error {
 public:
  using Error::Error;
};

/// Factor structure of two operands does not match.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid factor parameters, weights or configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Invalid numeric parameter for an otherwise well-formed request (e.g. s <= h).
class ParameterError : public Error {
 public:
  using Error::Error;
};

class Nonconvergence : public Error {
 public:
  using Error::Error;
};

/// A bisection bracket does not straddle the sought root.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// The barycenter objective is not strictly convex at the solution.
class DegenerateMeasure : public Error {
 public:
  using Error::Error;
};

/// A matrix functional is undefined at the given argument.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An inequality that should hold was violated. Carries a printable witness.
class CounterexampleFound : public Error {
 public:
  CounterexampleFound(const std::string& what, std::string witness)
      : Error(what), witness_(std::move(witness)) {}
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

/// A barycenter solve inside a finite-difference stencil failed.
class StencilFailure : public Error {
 public:
  StencilFailure(int stencil_index, const std::string& cause);
  int stencil_index() const noexcept { return stencil_index_; }

 private:
  int stencil_index_;
};

}  // namespace minent

#endif  // MINENT_ERRORS_HPP
