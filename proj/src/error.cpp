#include "dsikit/error.hpp"

namespace dsikit {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAsymmetricCovariance: return "AsymmetricCovariance";
    case ErrorCode::kNotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kUnknownModel: return "UnknownModel";
    case ErrorCode::kParamLengthMismatch: return "ParamLengthMismatch";
    case ErrorCode::kNotADependentBlock: return "NotADependentBlock";
    case ErrorCode::kPermutationInvalid: return "PermutationInvalid";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kInconsistentPrefix: return "InconsistentPrefix";
    case ErrorCode::kBlockTooSmall: return "BlockTooSmall";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kIndexNotInGround: return "IndexNotInGround";
    case ErrorCode::kSubsetTooLarge: return "SubsetTooLarge";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kDegenerateVariance: return "DegenerateVariance";
    case ErrorCode::kBlockTooLarge: return "BlockTooLarge";
    case ErrorCode::kDimensionTooLargeForExact: return "DimensionTooLargeForExact";
    case ErrorCode::kNotIndependentInput: return "NotIndependentInput";
    case ErrorCode::kExactPathUnavailable: return "ExactPathUnavailable";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kNonpositiveVariance: return "NonpositiveVariance";
    case ErrorCode::kGradientUnavailable: return "GradientUnavailable";
    case ErrorCode::kBoundUnavailable: return "BoundUnavailable";
    case ErrorCode::kConfigParse: return "ConfigParse";
  }
  return "Unknown";
}

std::string_view error_module(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAsymmetricCovariance:
    case ErrorCode::kNotPositiveSemidefinite:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kZeroVariance:
    case ErrorCode::kUnknownModel:
    case ErrorCode::kParamLengthMismatch:
      return "input-model";
    case ErrorCode::kNotADependentBlock:
    case ErrorCode::kPermutationInvalid:
    case ErrorCode::kLengthMismatch:
    case ErrorCode::kInconsistentPrefix:
      return "dependency";
    case ErrorCode::kBlockTooSmall:
    case ErrorCode::kOutOfRange:
    case ErrorCode::kIndexNotInGround:
    case ErrorCode::kSubsetTooLarge:
    case ErrorCode::kOverflow:
      return "combinatorics";
    case ErrorCode::kDegenerateVariance:
    case ErrorCode::kInvalidConfig:
      return "variance-engine";
    case ErrorCode::kBlockTooLarge:
    case ErrorCode::kDimensionTooLargeForExact:
    case ErrorCode::kNotIndependentInput:
    case ErrorCode::kExactPathUnavailable:
      return "indices";
    case ErrorCode::kNonpositiveVariance:
    case ErrorCode::kGradientUnavailable:
    case ErrorCode::kBoundUnavailable:
      return "bounds";
    case ErrorCode::kConfigParse:
      return "cli";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(what), code_(code) {}

}  // namespace dsikit
