#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mstefan {

enum class ErrorCode {
  DimensionMismatch,
  NonSymmetricD,
  NonPositiveOffDiagonal,
  NotStrictlyAdmissible,
  SingularA0,
  WrongSpeciesCount,
  NotSymmetric,
  InadmissibleInitialData,
  InvalidParameter,
  LinearSolveFailure,
  NonlinearDivergence,
  AuditFailure,
  Aborted,
  InsufficientData,
  NonPositiveEntropy,
  BadReference,
  InconsistentFields,
  ParseError,
  ValidationError,
};

const char* to_string(ErrorCode code);

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Picard iteration failed after all damping retries.
class NonlinearDivergence : public Error {
 public:
  NonlinearDivergence(const std::string& what, std::vector<double> increments)
      : Error(ErrorCode::NonlinearDivergence, what), increments_(std::move(increments)) {}

  /// Max-norm increments of the last attempt, in iteration order.
  const std::vector<double>& increments() const noexcept { return increments_; }

 private:
  std::vector<double> increments_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string key, const std::string& reason)
      : Error(ErrorCode::ValidationError, key + ": " + reason), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace mstefan
