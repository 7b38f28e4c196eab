#include "blt/errors.hpp"

#include "blt/regime.hpp"

namespace blt {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateDecay: return "DuplicateDecay";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::kComplexRoots: return "ComplexRoots";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kBracketFailure: return "BracketFailure";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kInversionFailure: return "InversionFailure";
    case ErrorCode::kDegenerateDecays: return "DegenerateDecays";
    case ErrorCode::kInterlacingViolation: return "InterlacingViolation";
    case ErrorCode::kZeroDecay: return "ZeroDecay";
    case ErrorCode::kSizeLimit: return "SizeLimit";
    case ErrorCode::kNonUnitConstant: return "NonUnitConstant";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kSingularWorkload: return "SingularWorkload";
    case ErrorCode::kDegenerateRegime: return "DegenerateRegime";
    case ErrorCode::kNearDoubleRoot: return "NearDoubleRoot";
    case ErrorCode::kPerturbationInvalid: return "PerturbationInvalid";
    case ErrorCode::kInitInvalid: return "InitInvalid";
    case ErrorCode::kNonFinite: return "NonFinite";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

InterlacingError::InterlacingError(std::size_t position,
                                   const std::string& message)
    : Error(ErrorCode::kInterlacingViolation, message), position_(position) {}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::kLT1: return "LT1";
    case Regime::kEQ1: return "EQ1";
    case Regime::kGT1: return "GT1";
  }
  return "?";
}

std::optional<Regime> parse_regime(std::string_view text) {
  if (text == "LT1") return Regime::kLT1;
  if (text == "EQ1") return Regime::kEQ1;
  if (text == "GT1") return Regime::kGT1;
  return std::nullopt;
}

}  // namespace blt
