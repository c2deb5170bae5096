#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace abem {

enum class ErrorKind {
  InvalidGeometry,
  InvalidArgument,
  NoOp,
  OverlayMismatch,
  Unsupported,
  SingularPoint,
  SpaceMismatch,
  OffCurve,
  InvalidSpace,
  NotPositiveDefinite,
  InconsistentExactEnergy,
  InsufficientData,
  ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` tells callers which
/// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace abem
