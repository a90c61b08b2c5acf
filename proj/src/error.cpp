#include "discflux/error.hpp"

namespace discflux {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::BelowMinimum: return "BelowMinimum";
    case ErrorKind::BracketExceeded: return "BracketExceeded";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::SignViolation: return "SignViolation";
    case ErrorKind::TimeOrderViolation: return "TimeOrderViolation";
    case ErrorKind::SlopeOutOfRange: return "SlopeOutOfRange";
    case ErrorKind::InvalidFlux: return "InvalidFlux";
    case ErrorKind::InvalidConnection: return "InvalidConnection";
    case ErrorKind::UnknownScenario: return "UnknownScenario";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::UnstableBlowup: return "UnstableBlowup";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::EmptyRegion: return "EmptyRegion";
  }
  return "Unknown";
}

bool Error::is_validation() const noexcept {
  switch (kind_) {
    case ErrorKind::SignViolation:
    case ErrorKind::TimeOrderViolation:
    case ErrorKind::InvalidFlux:
    case ErrorKind::InvalidConnection:
    case ErrorKind::UnknownScenario:
    case ErrorKind::InvalidConfig:
    case ErrorKind::GridMismatch:
      return true;
    default:
      return false;
  }
}

}  // namespace discflux
