#pragma once

#include <stdexcept>
#include <string>

namespace closure {

enum class ErrorKind {
  InputDomain,
  DegenerateMetric,
  Precondition,
  Resolution,
  LapsePositivity,
  UndefinedParameter,
  DivisionDomain,
  InvalidHypothesis,
  Positivity,
  DegenerateRecovery,
  UnsupportedTopology,
  Syntax,
  UnknownIdentifier,
  EvaluationDomain,
  Schema,
  Shape,
  Io,
  InvariantViolation,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the toolkit carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix carried by what().
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace closure
