#pragma once

#include <stdexcept>
#include <string>

namespace peglab {

enum class ErrorCode {
  InvalidArgument,
  InvalidCurve,
  NotSimpleAfterSmoothing,
  CenterOnLoop,
  EmptySpectrum,
  DiagonalHit,
  NotElegant,
  StallAtFloor,
  NoAdmissiblePath,
  IntervalEmpty,
  IoFailure,
  ParseError,
};

const char* to_string(ErrorCode code) noexcept;

/// Every recoverable failure in the library is reported as a peglab::Error
/// carrying one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace peglab
