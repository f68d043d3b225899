#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace fermidq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched or unknown generators, malformed algebra definitions.
class AlgebraError : public Error {
 public:
  using Error::Error;
};

/// Parameter outside the domain an operation is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// Eigen-solve, clustering or projector polishing failed.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Non-integer Renyi order requested for a state with negative eigenvalues.
class IndefiniteStateError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t column)
      : Error("column " + std::to_string(column) + ": " + what), column_(column) {}

  /// 1-based column of the offending character.
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// Wraps a failure inside a named pipeline stage of a scenario run.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}

  [[nodiscard]] const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace fermidq
