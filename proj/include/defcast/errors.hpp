// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "defcast/vector.hpp"

namespace defcast {

/// A caller broke a precondition (dimension mismatch, point outside a domain).
class ContractViolation : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// User-supplied data or configuration is out of range.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The zero finder could not certify a forecast. Carries the best point seen.
class SolverFailure : public std::runtime_error {
public:
  SolverFailure(const std::string& message, Vector best_point, double best_slack)
      : std::runtime_error(message), best_point_(std::move(best_point)), best_slack_(best_slack) {}

  const Vector& best_point() const noexcept { return best_point_; }
  double best_slack() const noexcept { return best_slack_; }

  std::size_t round = 0;

private:
  Vector best_point_;
  double best_slack_;
};

/// Malformed transcript or input file; `line()` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class SchemaVersionError : public ParseError {
public:
  using ParseError::ParseError;
};

/// No finite bound on sup ||Phi|| is known for the kernel over the given region.
class CPhiUnavailable : public std::runtime_error {
public:
  CPhiUnavailable() : std::runtime_error("C_Phi unavailable") {}
  explicit CPhiUnavailable(const std::string& why) : std::runtime_error("C_Phi unavailable: " + why) {}
};

} // namespace defcast
