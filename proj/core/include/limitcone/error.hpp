#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace limitcone {

enum class ErrorCode {
  InvalidArgument,
  ToleranceTooSmall,
  // hyp2
  NonHyperbolic,
  OrientationReversing,
  Degenerate,
  Crossing,
  Asymptotic,
  NonHyperbolicResolution,
  // fricke
  TraceOutOfRange,
  NotDiscretelike,
  LengthNonPositive,
  NonConvexCocompact,
  PrecisionExhausted,
  // polygons
  NonPositiveParam,
  EmbeddingFailure,
  FootOutsideSide,
  AdjustmentFailed,
  // cone
  ZeroVector,
  DegenerateHull,
  UnsupportedDimension,
  // wordgen
  EmptyCloud,
  NotFound,
  // cli
  Config,
  Io,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a code so that callers (the CLI
// in particular) can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace limitcone
