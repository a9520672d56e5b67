#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wulffcurv {

enum class ErrorKind {
  NonUnitInput,
  NonPositiveValue,
  NonOrthonormalFrame,
  ConvexityViolation,
  DegenerateParametrization,
  SizeMismatch,
  NonTangentField,
  ProjectionFailure,
  NotPositiveDefinite,
  NonPositiveSpectrum,
  ImmersionLoss,
  TopologyError,
  SolverFailure,
  NotCritical,
  ParseError,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the ErrorKind tags so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace wulffcurv
