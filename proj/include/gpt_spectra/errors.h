#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gpt_spectra {

enum class ErrorCode {
  kDimensionMismatch,
  kOutOfRange,
  kLpNumericalFailure,
  kNotAState,
  kInvalidArgument,
  kInvalidAxis,
  kDegenerateInput,
  kSingularInnerProduct,
  kNotInCone,
  kDecompositionUnavailable,
  kAsymmetricFunction,
  kEnumerationBudgetExceeded,
  kNegativeEntry,
  kNotFineGrained,
  kNotProjective,
  kNotAtomic,
  kNotPure,
  kLatticeTooLarge,
  kNotABasis,
  kModelUnsupported,
  kGridOutOfBounds,
  kFiltersIncomplete,
  kNoReversibleMap,
  kZeroWeightBranch,
  kConfig,
};

std::string_view ErrorCodeName(ErrorCode code);

/// The single exception type thrown by the library. The code identifies the
/// failing contract; the message carries the numeric detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gpt_spectra
