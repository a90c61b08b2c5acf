#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace discflux {

enum class ErrorKind {
  NoSignChange,
  BelowMinimum,
  BracketExceeded,
  OutOfRange,
  SignViolation,
  TimeOrderViolation,
  SlopeOutOfRange,
  InvalidFlux,
  InvalidConnection,
  UnknownScenario,
  InvalidConfig,
  UnstableBlowup,
  GridMismatch,
  EmptyRegion,
};

std::string_view to_string(ErrorKind kind);

// Every module error carries a kind so the CLI can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Validation and configuration problems, as opposed to numeric failures.
  bool is_validation() const noexcept;

 private:
  ErrorKind kind_;
};

}  // namespace discflux
