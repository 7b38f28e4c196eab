#include "blt/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blt/eigen.hpp"
#include "blt/errors.hpp"
#include "blt/tolerances.hpp"

namespace blt {

Polynomial::Polynomial() : coeffs_{0.0} {}

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

Polynomial Polynomial::trimmed(double relative_tol) const {
  const double threshold = relative_tol * max_abs_coeff();
  std::vector<double> c = coeffs_;
  while (c.size() > 1 && std::abs(c.back()) <= threshold) c.pop_back();
  if (c.size() == 1 && std::abs(c[0]) <= threshold) c[0] = 0.0;
  return Polynomial(std::move(c));
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double Polynomial::operator()(double x) const {
  double value = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    value = value * x + *it;
  }
  return value;
}

std::complex<double> Polynomial::operator()(std::complex<double> x) const {
  std::complex<double> value = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    value = value * x + *it;
  }
  return value;
}

double Polynomial::eval_accurate(double x) const {
  double value = 0.0;
  double correction = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    const double product = value * x;
    const double product_err = std::fma(value, x, -product);
    const double sum = product + *it;
    const double z = sum - product;
    const double sum_err = (product - (sum - z)) + (*it - z);
    value = sum;
    correction = correction * x + (product_err + sum_err);
  }
  return value + correction;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() == 1) return Polynomial();
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    d[k - 1] = static_cast<double>(k) * coeffs_[k];
  }
  return Polynomial(std::move(d));
}

double eval(const Polynomial& poly, double x) { return poly(x); }

namespace {

void check_distinct(std::span<const double> lambda) {
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    for (std::size_t j = i + 1; j < lambda.size(); ++j) {
      if (std::abs(lambda[i] - lambda[j]) <= tol::kSeparation) {
        std::ostringstream msg;
        msg << "lambda[" << i << "]=" << lambda[i] << " and lambda[" << j
            << "]=" << lambda[j] << " are not separated";
        throw Error(ErrorCode::kDuplicateDecay, msg.str());
      }
    }
  }
}

// Multiplies c (ascending) by (1 - root_inverse * x) in place.
void multiply_linear(std::vector<double>& c, double lambda) {
  c.push_back(0.0);
  for (std::size_t k = c.size() - 1; k > 0; --k) c[k] -= lambda * c[k - 1];
}

}  // namespace

Polynomial build_q(std::span<const double> lambda) {
  check_distinct(lambda);
  std::vector<double> c{1.0};
  c.reserve(lambda.size() + 1);
  for (double l : lambda) multiply_linear(c, l);
  return Polynomial(std::move(c));
}

Polynomial build_p(std::span<const double> alpha,
                   std::span<const double> lambda) {
  if (alpha.size() != lambda.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "alpha has " + std::to_string(alpha.size()) +
                    " entries, lambda has " + std::to_string(lambda.size()));
  }
  check_distinct(lambda);
  const std::size_t d = lambda.size();
  std::vector<double> sum(std::max<std::size_t>(d, 1), 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> term{1.0};
    for (std::size_t j = 0; j < d; ++j) {
      if (j != i) multiply_linear(term, lambda[j]);
    }
    for (std::size_t k = 0; k < term.size(); ++k) sum[k] += alpha[i] * term[k];
  }
  return Polynomial(std::move(sum));
}

Polynomial build_r(const Polynomial& p, const Polynomial& q) {
  const auto pc = p.coeffs();
  const auto qc = q.coeffs();
  std::vector<double> r(std::max(qc.size(), pc.size() + 1), 0.0);
  for (std::size_t k = 0; k < qc.size(); ++k) r[k] += qc[k];
  if (!p.is_zero()) {
    for (std::size_t k = 0; k < pc.size(); ++k) r[k + 1] += pc[k];
  }
  const std::size_t top = r.size() - 1;
  if (top >= 1 && top == static_cast<std::size_t>(q.degree())) {
    const double from_q = qc[top];
    const double from_p = top - 1 < pc.size() ? pc[top - 1] : 0.0;
    const double scale = std::max(std::abs(from_q), std::abs(from_p));
    if (std::abs(r[top]) <= tol::kDegeneracy * scale) r[top] = 0.0;
  }
  return Polynomial(std::move(r));
}

Eigen::MatrixXd companion_matrix(const Polynomial& poly) {
  if (poly.is_zero()) {
    throw Error(ErrorCode::kZeroPolynomial,
                "companion matrix of the zero polynomial");
  }
  const int n = poly.degree();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  if (n == 0) return m;
  const auto c = poly.coeffs();
  for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  for (int k = 0; k < n; ++k) m(k, n - 1) = -c[k] / c[n];
  return m;
}

std::vector<std::complex<double>> complex_roots(const Polynomial& poly) {
  return linalg::eigenvalues(companion_matrix(poly));
}

namespace {

double max_residual(const Polynomial& poly, std::span<const double> roots) {
  double residual = 0.0;
  for (double x : roots) residual = std::max(residual, std::abs(poly.eval_accurate(x)));
  return residual;
}

// Safeguarded Newton on [lo, hi] where poly(lo) and poly(hi) differ in sign.
double solve_in_bracket(const Polynomial& poly, const Polynomial& slope,
                        double lo, double hi) {
  double f_lo = poly.eval_accurate(lo);
  if (f_lo == 0.0) return lo;
  if (poly.eval_accurate(hi) == 0.0) return hi;
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 400; ++iter) {
    const double f = poly.eval_accurate(x);
    if (f == 0.0) return x;
    if ((f < 0.0) == (f_lo < 0.0)) {
      lo = x;
      f_lo = f;
    } else {
      hi = x;
    }
    const double width = hi - lo;
    if (width <= tol::kBracketWidth * std::max(1.0, std::abs(x))) break;
    const double df = slope(x);
    double next = df != 0.0 ? x - f / df : lo - 1.0;
    // Newton only when it lands inside the current bracket.
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
  }
  return x;
}

// Newton refinement of an eigenvalue; a step is kept only while it reduces
// |poly|.
double polish(const Polynomial& poly, const Polynomial& slope, double x) {
  double fx = std::abs(poly.eval_accurate(x));
  for (int iter = 0; iter < 8 && fx > 0.0; ++iter) {
    const double df = slope(x);
    if (df == 0.0) break;
    const double next = x - poly.eval_accurate(x) / df;
    const double fn = std::abs(poly.eval_accurate(next));
    if (!(fn < fx)) break;
    x = next;
    fx = fn;
  }
  return x;
}

}  // namespace

RootSet roots_companion(const Polynomial& poly) {
  RootSet out;
  if (poly.degree() == 0) {
    if (poly.is_zero()) {
      throw Error(ErrorCode::kZeroPolynomial, "roots of the zero polynomial");
    }
    return out;
  }
  const Polynomial slope = poly.derivative();
  for (const auto& z : complex_roots(poly)) {
    if (std::abs(z.imag()) > tol::kImaginary * (1.0 + std::abs(z.real()))) {
      std::ostringstream msg;
      msg << "eigenvalue " << z.real() << (z.imag() < 0 ? " - " : " + ")
          << std::abs(z.imag()) << "i is not real";
      throw Error(ErrorCode::kComplexRoots, msg.str());
    }
    out.roots.push_back(polish(poly, slope, z.real()));
  }
  std::sort(out.roots.begin(), out.roots.end());
  out.residual = max_residual(poly, out.roots);
  return out;
}

RootSet roots_bracketed(const Polynomial& r, std::span<const double> mu,
                        Regime regime) {
  const std::size_t d = mu.size();
  for (std::size_t i = 1; i < d; ++i) {
    if (!(mu[i] > mu[i - 1])) {
      throw Error(ErrorCode::kBracketFailure, "mu must be strictly ascending");
    }
  }
  const Polynomial slope = r.derivative();
  RootSet out;

  auto solve = [&](double lo, double hi) {
    const double f_lo = r.eval_accurate(lo);
    const double f_hi = r.eval_accurate(hi);
    if (f_lo != 0.0 && f_hi != 0.0 && (f_lo < 0.0) == (f_hi < 0.0)) {
      std::ostringstream msg;
      msg << "no sign change of r on (" << lo << ", " << hi << ")";
      throw Error(ErrorCode::kBracketFailure, msg.str());
    }
    out.roots.push_back(solve_in_bracket(r, slope, lo, hi));
  };

  // Grows |x| from `start` by doubling until r changes sign relative to r(anchor).
  auto expand = [&](double anchor, double start) {
    const bool anchor_negative = r.eval_accurate(anchor) < 0.0;
    double x = start;
    for (int k = 0; k < 64; ++k) {
      const double f = r.eval_accurate(x);
      if (f == 0.0 || (f < 0.0) != anchor_negative) return x;
      x *= 2.0;
    }
    std::ostringstream msg;
    msg << "no sign change of r beyond " << anchor << " within 64 doublings";
    throw Error(ErrorCode::kBracketFailure, msg.str());
  };

  if (regime == Regime::kGT1 && d > 0) {
    const double far = expand(-1.0, -2.0);
    solve(far, -1.0);
  }
  for (std::size_t i = 0; i + 1 < d; ++i) solve(mu[i], mu[i + 1]);
  if (regime == Regime::kLT1 && d > 0) {
    const double far = expand(mu[d - 1], 2.0 * mu[d - 1]);
    solve(mu[d - 1], far);
  }
  std::sort(out.roots.begin(), out.roots.end());
  out.residual = max_residual(r, out.roots);
  return out;
}

}  // namespace blt
