#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dpmod {

enum class ErrorCode {
  BadIndex,
  DegenerateCell,
  Disconnected,
  MeshMismatch,
  NotSPD,
  NotSymmetric,
  NonpositiveExponent,
  BadExponent,
  NonpositiveScale,
  SameVertex,
  ZeroDistancePair,
  NonConverged,
  InfeasibleNormalization,
  TooManyVertices,
  NotOneDimensional,
  BadSchedule,
  BadDimension,
  ParseError,
  BadConfig,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. The code is
/// stable and is what callers (and the CLI exit-code mapping) switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dpmod
