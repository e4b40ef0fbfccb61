#include "closure/error.hpp"

namespace closure {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InputDomain: return "input-domain";
    case ErrorKind::DegenerateMetric: return "degenerate-metric";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::LapsePositivity: return "lapse-positivity";
    case ErrorKind::UndefinedParameter: return "undefined-parameter";
    case ErrorKind::DivisionDomain: return "division-domain";
    case ErrorKind::InvalidHypothesis: return "invalid-hypothesis";
    case ErrorKind::Positivity: return "positivity";
    case ErrorKind::DegenerateRecovery: return "degenerate-recovery";
    case ErrorKind::UnsupportedTopology: return "unsupported-topology";
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::UnknownIdentifier: return "unknown-identifier";
    case ErrorKind::EvaluationDomain: return "evaluation-domain";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Io: return "io";
    case ErrorKind::InvariantViolation: return "invariant-violation";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

}  // namespace closure
