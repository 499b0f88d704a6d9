#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dsikit {

enum class ErrorCode {
  // input-model
  kAsymmetricCovariance,
  kNotPositiveSemidefinite,
  kDimensionMismatch,
  kZeroVariance,
  kUnknownModel,
  kParamLengthMismatch,
  // dependency
  kNotADependentBlock,
  kPermutationInvalid,
  kLengthMismatch,
  kInconsistentPrefix,
  // combinatorics
  kBlockTooSmall,
  kOutOfRange,
  kIndexNotInGround,
  kSubsetTooLarge,
  kOverflow,
  // variance-engine / indices
  kDegenerateVariance,
  kBlockTooLarge,
  kDimensionTooLargeForExact,
  kNotIndependentInput,
  kExactPathUnavailable,
  kInvalidConfig,
  // bounds
  kNonpositiveVariance,
  kGradientUnavailable,
  kBoundUnavailable,
  // cli
  kConfigParse,
};

/// Name of the error as used in messages, e.g. "NotPositiveSemidefinite".
std::string_view error_name(ErrorCode code);

/// Owning module of an error code ("input-model", "dependency", ...).
std::string_view error_module(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dsikit
