#ifndef BLT_ERRORS_HPP_
#define BLT_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace blt {

enum class ErrorCode {
  kDuplicateDecay,
  kDimensionMismatch,
  kZeroPolynomial,
  kComplexRoots,
  kNoConvergence,
  kBracketFailure,
  kInvalidParams,
  kInversionFailure,
  kDegenerateDecays,
  kInterlacingViolation,
  kZeroDecay,
  kSizeLimit,
  kNonUnitConstant,
  kLengthMismatch,
  kSingularWorkload,
  kDegenerateRegime,
  kNearDoubleRoot,
  kPerturbationInvalid,
  kInitInvalid,
  kNonFinite,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by from_interlaced. `position` indexes the chain
// 1 > l[0] > lh[0] > l[1] > ... > lh[d-1] > 0, where inequality k compares
// chain elements k and k+1.
class InterlacingError : public Error {
 public:
  InterlacingError(std::size_t position, const std::string& message);

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace blt

#endif  // BLT_ERRORS_HPP_
