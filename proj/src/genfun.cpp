#include "blt/genfun.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "blt/errors.hpp"
#include "blt/tolerances.hpp"

namespace blt {

namespace {

Polynomial scaled(const Polynomial& p, double factor) {
  std::vector<double> c(p.coeffs().begin(), p.coeffs().end());
  for (double& v : c) v *= factor;
  return Polynomial(std::move(c));
}

}  // namespace

RationalGF::RationalGF(Polynomial num, Polynomial den) {
  const double c0 = den.coeffs()[0];
  if (c0 == 0.0) {
    throw Error(ErrorCode::kNonUnitConstant,
                "denominator vanishes at x = 0; no power series exists");
  }
  num_ = c0 == 1.0 ? std::move(num) : scaled(num, 1.0 / c0);
  den_ = c0 == 1.0 ? std::move(den) : scaled(den, 1.0 / c0);
}

RationalGF genfun_of(const BltParams& params) {
  const ValidationReport report = validate(params, ValidationMode::kLenient);
  if (!report) throw Error(ErrorCode::kInvalidParams, report.summary());
  const Polynomial q = build_q(params.lambda);
  const Polynomial p = build_p(params.alpha, params.lambda);
  return RationalGF(build_r(p, q), q);
}

RationalGF reciprocal(const RationalGF& gf) {
  return RationalGF(gf.den(), gf.num());
}

std::vector<double> maclaurin(const RationalGF& gf, std::size_t n) {
  const auto num = gf.num().coeffs();
  const auto den = gf.den().coeffs();
  std::vector<double> c(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double value = t < num.size() ? num[t] : 0.0;
    const std::size_t kmax = std::min(t, den.size() - 1);
    for (std::size_t k = 1; k <= kmax; ++k) value -= den[k] * c[t - k];
    c[t] = value;
  }
  return c;
}

std::vector<double> convolve_truncated(std::span<const double> a,
                                       std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch, "series lengths differ");
  }
  const std::size_t n = a.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double sum = 0.0;
    for (std::size_t k = 0; k <= t; ++k) sum += a[k] * b[t - k];
    out[t] = sum;
  }
  return out;
}

double series_product_check(std::span<const double> a, std::span<const double> b,
                            std::span<const double> expected) {
  if (expected.size() != a.size()) {
    throw Error(ErrorCode::kLengthMismatch, "expected series length differs");
  }
  const auto product = convolve_truncated(a, b);
  double deviation = 0.0;
  for (std::size_t t = 0; t < product.size(); ++t) {
    deviation = std::max(deviation, std::abs(product[t] - expected[t]));
  }
  return deviation;
}

bool is_coprime(const RationalGF& gf) {
  if (gf.den().degree() == 0) return true;
  if (gf.num().is_zero()) return false;
  if (gf.num().degree() == 0) return true;
  const auto num_roots = complex_roots(gf.num());
  for (const auto& z : complex_roots(gf.den())) {
    for (const auto& w : num_roots) {
      if (std::abs(z - w) <= tol::kSeparation * std::max(1.0, std::abs(z))) return false;
    }
  }
  return true;
}

double partial_fraction_value(const InverseBltParams& inv, double x) {
  double value = 1.0;
  for (std::size_t i = 0; i < inv.degree(); ++i) {
    value += inv.alpha_hat[i] * x / (1.0 - inv.lambda_hat[i] * x);
  }
  return value;
}

}  // namespace blt
