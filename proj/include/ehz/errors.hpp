#pragma once

#include <stdexcept>
#include <string>

namespace ehz {

enum class ErrorCode {
  kInvalidArgument = 1,
  kParse,
  kInvalidBody,
  kDimensionMismatch,
  kOriginNotInterior,
  kPointOutsideBody,
  kCurveCollapses,
  kLengthMismatch,
  kNoValidSubselection,
  kNotABilliard,
  kPointOffBoundary,
  kGridTooCoarse,
  kNumericalFailure,
  kIdentityCheck,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// the C layer can translate it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ehz
