#include "abem/error.hpp"

namespace abem {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidGeometry: return "InvalidGeometry";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NoOp: return "NoOp";
    case ErrorKind::OverlayMismatch: return "OverlayMismatch";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::SpaceMismatch: return "SpaceMismatch";
    case ErrorKind::OffCurve: return "OffCurve";
    case ErrorKind::InvalidSpace: return "InvalidSpace";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::InconsistentExactEnergy: return "InconsistentExactEnergy";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace abem
