#ifndef BLT_GENFUN_HPP_
#define BLT_GENFUN_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "blt/blt.hpp"
#include "blt/poly.hpp"

namespace blt {

// num(x) / den(x) with den(0) normalized to 1.
class RationalGF {
 public:
  // Divides both polynomials by den(0); throws NonUnitConstant if it is 0.
  RationalGF(Polynomial num, Polynomial den);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }

  double operator()(double x) const { return num_(x) / den_(x); }

 private:
  Polynomial num_;
  Polynomial den_;
};

// f(x) = r(x) / q(x), the generating function of the first column.
RationalGF genfun_of(const BltParams& params);

// f_hat = den / num.
RationalGF reciprocal(const RationalGF& gf);

// First n Maclaurin coefficients of num/den.
std::vector<double> maclaurin(const RationalGF& gf, std::size_t n);

// Truncated Cauchy product of two coefficient sequences of equal length.
std::vector<double> convolve_truncated(std::span<const double> a,
                                       std::span<const double> b);

// max_t |(a * b)_t - expected_t|. Equal to the largest deviation of the first
// column of T(a) T(b) from T(expected) for lower-triangular Toeplitz T(.).
double series_product_check(std::span<const double> a, std::span<const double> b,
                            std::span<const double> expected);

// True when no root z of den lies within tol::kSeparation * max(1, |z|) of a
// root of num (roots from the companion eigensolver, complex allowed).
bool is_coprime(const RationalGF& gf);

// 1 + sum_i alpha_hat_i x / (1 - lambda_hat_i x).
double partial_fraction_value(const InverseBltParams& inv, double x);

}  // namespace blt

#endif  // BLT_GENFUN_HPP_
