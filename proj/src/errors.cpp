#include "ehz/errors.hpp"

namespace ehz {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kInvalidBody: return "invalid-body";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kOriginNotInterior: return "origin-not-interior";
    case ErrorCode::kPointOutsideBody: return "point-outside-body";
    case ErrorCode::kCurveCollapses: return "curve-collapses";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kNoValidSubselection: return "no-valid-subselection";
    case ErrorCode::kNotABilliard: return "not-a-billiard";
    case ErrorCode::kPointOffBoundary: return "point-off-boundary";
    case ErrorCode::kGridTooCoarse: return "grid-too-coarse";
    case ErrorCode::kNumericalFailure: return "numerical-failure";
    case ErrorCode::kIdentityCheck: return "identity-check-failure";
  }
  return "unknown";
}

}  // namespace ehz
