#ifndef BLT_TOLERANCES_HPP_
#define BLT_TOLERANCES_HPP_

#include <cstddef>

namespace blt::tol {

// Relative threshold separating a vanishing leading coefficient of r from a
// genuine one. Also the half-width of the EQ1 band around sum(alpha/lambda)=1.
inline constexpr double kDegeneracy = 1e-12;

// Minimal gap between two decay parameters to count as distinct.
inline constexpr double kSeparation = 1e-10;

// Imaginary parts below kImaginary * (1 + |Re|) are treated as round-off.
inline constexpr double kImaginary = 1e-8;

// Root residual bound relative to the largest coefficient magnitude.
inline constexpr double kRootResidual = 1e-9;

// Bracket width at which bisection/Newton stops (scaled by max(1, |x|)).
inline constexpr double kBracketWidth = 1e-14;

// Total shifted-QR iterations allowed per eigenvalue.
inline constexpr int kQrIterationsPerRoot = 100;

// Largest n accepted by dense materialization unless overridden.
inline constexpr std::size_t kDefaultMaxDenseN = 4096;

}  // namespace blt::tol

#endif  // BLT_TOLERANCES_HPP_
