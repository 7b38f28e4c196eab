#ifndef BLT_BLT_HPP_
#define BLT_BLT_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "blt/regime.hpp"
#include "blt/tolerances.hpp"

namespace blt {

// Scales alpha and decays lambda of a diagonal BLT. The Toeplitz column is
// c_1 = 1, c_k = sum_i alpha_i lambda_i^(k-2) for k >= 2.
struct BltParams {
  std::vector<double> alpha;
  std::vector<double> lambda;

  std::size_t degree() const { return lambda.size(); }
};

struct InverseBltParams {
  std::vector<double> alpha_hat;
  std::vector<double> lambda_hat;
  Regime regime = Regime::kLT1;

  std::size_t degree() const { return lambda_hat.size(); }
  // The inverse viewed as a BLT in its own right.
  BltParams as_blt() const { return {alpha_hat, lambda_hat}; }
};

// Sorts (alpha_i, lambda_i) pairs so lambda is descending.
BltParams canonical(BltParams params);

enum class ValidationMode { kStrict, kLenient };

struct Violation {
  std::string constraint;
  std::string detail;
};

struct ValidationReport {
  bool valid = true;
  std::vector<Violation> violations;
  std::optional<Regime> regime;  // set by strict validation only
  double ratio_sum = 0.0;         // sum_i alpha_i / lambda_i

  explicit operator bool() const { return valid; }
  std::string summary() const;
};

// Strict: alpha_i > 0, sum alpha < 1, lambda in (0,1), lambda distinct.
// Lenient: sizes match, entries finite, lambda distinct.
ValidationReport validate(const BltParams& params, ValidationMode mode);

double ratio_sum(const BltParams& params);
Regime regime_of(const BltParams& params);

// First column c_1..c_n of BLT_n, by the per-channel geometric recurrence.
std::vector<double> toeplitz_coeffs(const BltParams& params, std::size_t n);

Eigen::MatrixXd materialize(const BltParams& params, std::size_t n,
                            std::size_t max_n = tol::kDefaultMaxDenseN);

// Parameters of BLT(params)^-1, lambda_hat descending. Accepts strict-valid
// params (in EQ1 the last decay is exactly zero) and the inverse of an LT1
// BLT (all alpha < 0, lambda in (0,1)), whose inverse has positive scales.
// Throws InvalidParams for anything else.
InverseBltParams invert_params(const BltParams& params);

struct ScalePair {
  std::vector<double> alpha;
  std::vector<double> alpha_hat;
};

// Closed-form scales of the unique (BLT, inverse) system with decays
// (lambda, lambda_hat).
ScalePair scales_from_decays(std::span<const double> lambda,
                             std::span<const double> lambda_hat);

// |sum_i alpha_hat_i / lambda_hat_i + prod lambda / prod lambda_hat - 1|;
// nullopt when some lambda_hat is zero.
std::optional<double> scale_identity_residual(
    std::span<const double> lambda, std::span<const double> lambda_hat,
    std::span<const double> alpha_hat);

// Builds the system from strictly interlaced decays
// 1 > lambda_1 > lambda_hat_1 > ... > lambda_d > lambda_hat_d > 0.
std::pair<BltParams, InverseBltParams> from_interlaced(
    std::span<const double> lambda, std::span<const double> lambda_hat);

// c_hat_1 = u.v + kappa, c_hat_t = u^T W^(t-1) v with W = diag(lambda_hat).
struct LegacyUWV {
  std::vector<double> w_diag;
  std::vector<double> u;
  std::vector<double> v;
  double kappa = 0.0;
  // 1 - sum alpha_i / lambda_i, kept for comparison with kappa; it equals
  // prod lambda_hat / prod lambda rather than kappa.
  double kappa_unhatted = 0.0;

  std::vector<double> coeffs(std::size_t n) const;
};

LegacyUWV legacy_uwv(const InverseBltParams& inv, const BltParams& params);

}  // namespace blt

#endif  // BLT_BLT_HPP_
