#ifndef BLT_POLY_HPP_
#define BLT_POLY_HPP_

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "blt/regime.hpp"

namespace blt {

// Real polynomial with coefficients in ascending power order, so
// coeffs()[k] multiplies x^k. Trailing zero coefficients are dropped on
// construction; the zero polynomial is stored as the single coefficient 0.
class Polynomial {
 public:
  Polynomial();
  explicit Polynomial(std::vector<double> coeffs);

  // Drops trailing coefficients with |c_k| <= relative_tol * max_k |c_k|.
  Polynomial trimmed(double relative_tol) const;

  std::span<const double> coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
  double leading() const { return coeffs_.back(); }
  double max_abs_coeff() const;

  // Horner evaluation.
  double operator()(double x) const;
  std::complex<double> operator()(std::complex<double> x) const;
  // Compensated Horner: as accurate as Horner in twice the working precision.
  double eval_accurate(double x) const;

  Polynomial derivative() const;

 private:
  std::vector<double> coeffs_;
};

double eval(const Polynomial& poly, double x);

// q(x) = prod_i (1 - lambda_i x).
Polynomial build_q(std::span<const double> lambda);

// p(x) = sum_i alpha_i prod_{j != i} (1 - lambda_j x).
Polynomial build_p(std::span<const double> alpha,
                   std::span<const double> lambda);

// r(x) = q(x) + x p(x). The x^d coefficient is the difference of the leading
// terms of q and x p; it is dropped when it cancels to within
// tol::kDegeneracy of those terms, which is exactly the EQ1 band.
Polynomial build_r(const Polynomial& p, const Polynomial& q);

// D x D matrix with ones on the subdiagonal and -c_k / c_D in the last column.
Eigen::MatrixXd companion_matrix(const Polynomial& poly);

// All D roots (possibly complex) as eigenvalues of the balanced companion
// matrix.
std::vector<std::complex<double>> complex_roots(const Polynomial& poly);

struct RootSet {
  std::vector<double> roots;  // ascending
  double residual = 0.0;      // max_i |poly(roots[i])|
};

// Real roots via the companion eigenvalues. Throws ComplexRoots if an
// eigenvalue has |Im| > tol::kImaginary * (1 + |Re|).
RootSet roots_companion(const Polynomial& poly);

// Real roots of r located in the brackets (mu_i, mu_{i+1}) plus, for LT1,
// (mu_d, X) and, for GT1, (-X, -1). `mu` must be ascending. Independent of
// the eigensolver.
RootSet roots_bracketed(const Polynomial& r, std::span<const double> mu,
                        Regime regime);

}  // namespace blt

#endif  // BLT_POLY_HPP_
