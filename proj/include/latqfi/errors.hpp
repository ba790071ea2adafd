#pragma once

#include <stdexcept>
#include <string>

namespace latqfi {

// Error identifiers are stable: the C API maps them 1:1 to lq_status codes.
enum class ErrorCode {
  None = 0,
  NonHermitianInput,
  ConvergenceFailure,
  InvalidOccupation,
  InvalidSize,
  InvalidParams,
  NegativeResult,
  DegenerateDistribution,
  StateCrossing,
  ShapeMismatch,
  InvalidZ,
  InvalidR,
  OutsideTopologicalPhase,
  NoGapIsolation,
  NoLowerBand,
  NonMonotonic,
  DimensionMismatch,
  NotAProjector,
  OddL,
  AtCriticality,
  GaplessInput,
  AllExcluded,
  IllConditioned,
  FlatLikelihood,
  ConfigError,
  Internal,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace latqfi
