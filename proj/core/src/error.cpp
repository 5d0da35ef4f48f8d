#include "peglab/error.hpp"

namespace peglab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidCurve: return "InvalidCurve";
    case ErrorCode::NotSimpleAfterSmoothing: return "NotSimpleAfterSmoothing";
    case ErrorCode::CenterOnLoop: return "CenterOnLoop";
    case ErrorCode::EmptySpectrum: return "EmptySpectrum";
    case ErrorCode::DiagonalHit: return "DiagonalHit";
    case ErrorCode::NotElegant: return "NotElegant";
    case ErrorCode::StallAtFloor: return "StallAtFloor";
    case ErrorCode::NoAdmissiblePath: return "NoAdmissiblePath";
    case ErrorCode::IntervalEmpty: return "IntervalEmpty";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace peglab
