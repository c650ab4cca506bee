#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace relcalc {

enum class ErrorCode {
  NotHermitian,
  NotOrthonormal,
  DimensionMismatch,
  InvalidTolerance,
  NotPSD,
  NotPD,
  NotContraction,
  NotSelfadjoint,
  NotNonnegative,
  NotSymmetric,
  DefectiveGraph,
  SpectrumHit,
  OutOfFormDomain,
  NotReducing,
  SingularCompression,
  NonMonotoneStep,
  NotContractive,
  ParamOutOfInterval,
  NotAnExtension,
  CriteriaDisagree,
  ExtremalPair,
  InvalidArgument,
  UnknownProperty,
  Parse,
  IO,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` distinguishes failure kinds.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace relcalc
