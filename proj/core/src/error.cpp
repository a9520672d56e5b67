#include "wulffcurv/error.hpp"

namespace wulffcurv {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonUnitInput: return "NonUnitInput";
    case ErrorKind::NonPositiveValue: return "NonPositiveValue";
    case ErrorKind::NonOrthonormalFrame: return "NonOrthonormalFrame";
    case ErrorKind::ConvexityViolation: return "ConvexityViolation";
    case ErrorKind::DegenerateParametrization: return "DegenerateParametrization";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::NonTangentField: return "NonTangentField";
    case ErrorKind::ProjectionFailure: return "ProjectionFailure";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NonPositiveSpectrum: return "NonPositiveSpectrum";
    case ErrorKind::ImmersionLoss: return "ImmersionLoss";
    case ErrorKind::TopologyError: return "TopologyError";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::NotCritical: return "NotCritical";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace wulffcurv
