#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "blt/errors.hpp"
#include "blt/poly.hpp"
#include "support/draws.hpp"
#include "support/oracles.hpp"

using namespace blt;
using doctest::Approx;

namespace {

void check_coeffs(const Polynomial& p, std::vector<double> expected, double tol = 1e-14) {
  REQUIRE(p.coeffs().size() == expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k) {
    CHECK(std::abs(p.coeffs()[k] - expected[k]) <= tol);
  }
}

std::vector<double> ascending_mu(const BltParams& p) {
  std::vector<double> mu;
  for (double l : p.lambda) mu.push_back(1.0 / l);
  std::sort(mu.begin(), mu.end());
  return mu;
}

Polynomial r_of(const BltParams& p) {
  return build_r(build_p(p.alpha, p.lambda), build_q(p.lambda));
}

}  // namespace

TEST_CASE("build_q expands the product of linear factors") {
  check_coeffs(build_q(std::vector<double>{0.8, 0.4}), {1.0, -1.2, 0.32});
  check_coeffs(build_q(std::vector<double>{}), {1.0});
  check_coeffs(build_q(std::vector<double>{0.5}), {1.0, -0.5});
  CHECK(build_q(std::vector<double>{0.9, 0.7, 0.2}).degree() == 3);
}

TEST_CASE("build_q rejects decays closer than the separation threshold") {
  try {
    build_q(std::vector<double>{0.5, 0.5 + 1e-12});
    FAIL("expected DuplicateDecay");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDuplicateDecay);
  }
}

TEST_CASE("build_p sums the deflated products") {
  check_coeffs(build_p(std::vector<double>{0.4, 0.2}, std::vector<double>{0.8, 0.4}),
               {0.6, -0.32});
  check_coeffs(build_p(std::vector<double>{0.2, 0.1}, std::vector<double>{0.8, 0.4}),
               {0.3, -0.16});
  CHECK(build_p(std::vector<double>{0.0, 0.0}, std::vector<double>{0.8, 0.4}).is_zero());
  try {
    build_p(std::vector<double>{0.1}, std::vector<double>{0.8, 0.4});
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimensionMismatch);
  }
}

TEST_CASE("build_p constant term is the alpha sum") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const BltParams p = testing::random_params(rng, 8);
    double sum = 0.0;
    for (double a : p.alpha) sum += a;
    const Polynomial poly = build_p(p.alpha, p.lambda);
    CHECK(poly.coeffs()[0] == Approx(sum).epsilon(1e-14));
    CHECK(poly.degree() <= static_cast<int>(p.degree()) - 1);
  }
}

TEST_CASE("build_r adds x p to q and drops a cancelled leading term") {
  const Polynomial q = build_q(std::vector<double>{0.8, 0.4});
  check_coeffs(build_r(Polynomial({0.6, -0.32}), q), {1.0, -0.6});
  check_coeffs(build_r(Polynomial({0.3, -0.16}), q), {1.0, -0.9, 0.16});
  check_coeffs(build_r(Polynomial(), q), {1.0, -1.2, 0.32});
}

TEST_CASE("eval uses Horner and matches known roots") {
  const Polynomial r({1.0, -0.9, 0.16});
  CHECK(std::abs(eval(r, 1.52403)) < 1e-5);
  CHECK(eval(r, 0.0) == 1.0);
  CHECK(std::abs(eval(Polynomial({1.0, -1.2, 0.32}), 1.25)) <= 1e-15);
  // Compensated evaluation agrees with plain Horner on benign input.
  CHECK(r.eval_accurate(0.3) == Approx(r(0.3)).epsilon(1e-15));
}

TEST_CASE("companion_matrix layout") {
  const Eigen::MatrixXd m = companion_matrix(Polynomial({1.0, -0.9, 0.16}));
  REQUIRE(m.rows() == 2);
  CHECK(m(0, 0) == 0.0);
  CHECK(m(0, 1) == Approx(-6.25));
  CHECK(m(1, 0) == 1.0);
  CHECK(m(1, 1) == Approx(5.625));

  const double c = 0.37;
  const Eigen::MatrixXd one = companion_matrix(Polynomial({-c, 1.0}));
  REQUIRE(one.rows() == 1);
  CHECK(one(0, 0) == Approx(c));

  const Eigen::MatrixXd f = companion_matrix(Polynomial({6.0, -5.0, 1.0}));
  CHECK(f(0, 1) == -6.0);
  CHECK(f(1, 1) == 5.0);

  try {
    companion_matrix(Polynomial());
    FAIL("expected ZeroPolynomial");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kZeroPolynomial);
  }
}

TEST_CASE("companion characteristic polynomial equals the monic input") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int degree = 1 + trial % 5;
    std::vector<double> c(degree + 1);
    for (double& v : c) v = coef(rng);
    if (std::abs(c.back()) < 0.1) c.back() = 1.0;
    const Polynomial poly(c);
    const std::vector<double> charpoly = testing::characteristic_polynomial(companion_matrix(poly));
    for (int k = 0; k <= degree; ++k) {
      CHECK(std::abs(charpoly[k] - c[k] / c.back()) <= 1e-12);
    }
  }
}

TEST_CASE("roots_companion on quadratics matches the quadratic formula") {
  const auto [a, b] = testing::quadratic_roots(1.0, -0.9, 0.16);
  const RootSet lt1 = roots_companion(Polynomial({1.0, -0.9, 0.16}));
  REQUIRE(lt1.roots.size() == 2);
  CHECK(lt1.roots[0] == Approx(a).epsilon(1e-13));
  CHECK(lt1.roots[1] == Approx(b).epsilon(1e-13));
  CHECK(lt1.roots[0] == Approx(1.524028).epsilon(1e-6));
  CHECK(lt1.roots[1] == Approx(4.100972).epsilon(1e-6));

  const RootSet eq1 = roots_companion(Polynomial({1.0, -0.6}));
  REQUIRE(eq1.roots.size() == 1);
  CHECK(eq1.roots[0] == Approx(5.0 / 3.0).epsilon(1e-15));

  const auto [g0, g1] = testing::quadratic_roots(1.0, -0.55, -0.12);
  const RootSet gt1 = roots_companion(Polynomial({1.0, -0.55, -0.12}));
  CHECK(gt1.roots[0] == Approx(g0).epsilon(1e-13));
  CHECK(gt1.roots[1] == Approx(g1).epsilon(1e-13));
  CHECK(gt1.roots[0] == Approx(-5.977458).epsilon(1e-6));
  CHECK(gt1.roots[1] == Approx(1.394124).epsilon(1e-6));
}

TEST_CASE("roots_companion reports complex roots") {
  try {
    roots_companion(Polynomial({1.0, 0.0, 1.0}));
    FAIL("expected ComplexRoots");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kComplexRoots);
  }
}

TEST_CASE("roots_bracketed examples") {
  const std::vector<double> mu{1.25, 2.5};
  const RootSet lt1 = roots_bracketed(Polynomial({1.0, -0.9, 0.16}), mu, Regime::kLT1);
  CHECK(lt1.roots[0] == Approx(1.524028).epsilon(1e-6));
  CHECK(lt1.roots[1] == Approx(4.100972).epsilon(1e-6));
  const RootSet gt1 = roots_bracketed(Polynomial({1.0, -0.55, -0.12}), mu, Regime::kGT1);
  CHECK(gt1.roots[0] == Approx(-5.977458).epsilon(1e-6));
  CHECK(gt1.roots[1] == Approx(1.394124).epsilon(1e-6));
  const RootSet eq1 = roots_bracketed(Polynomial({1.0, -0.6}), mu, Regime::kEQ1);
  REQUIRE(eq1.roots.size() == 1);
  CHECK(eq1.roots[0] == Approx(5.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("roots_bracketed fails without a sign change") {
  try {
    roots_bracketed(Polynomial({1.0, 0.0, 1.0}), std::vector<double>{1.25, 2.5},
                    Regime::kLT1);
    FAIL("expected BracketFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBracketFailure);
  }
}

TEST_CASE("root finders agree and interlace with mu on random draws") {
  std::mt19937_64 rng(29);
  for (int k = 0; k < 300; ++k) {
    const BltParams p = testing::random_params(rng, 8);
    const Regime regime = regime_of(p);
    const Polynomial r = r_of(p);
    const std::vector<double> mu = ascending_mu(p);
    const RootSet a = roots_companion(r);
    const RootSet b = roots_bracketed(r, mu, regime);
    REQUIRE(a.roots.size() == b.roots.size());
    for (std::size_t i = 0; i < a.roots.size(); ++i) {
      CHECK(std::abs(a.roots[i] - b.roots[i]) <= 1e-9 * std::abs(b.roots[i]));
    }
    // Interior brackets: mu_i < nu_i < mu_{i+1}; the GT1 root sits below -1.
    const std::size_t offset = regime == Regime::kGT1 ? 1 : 0;
    if (regime == Regime::kGT1) CHECK(a.roots[0] < -1.0);
    for (std::size_t i = 0; i + 1 < mu.size(); ++i) {
      CHECK(a.roots[i + offset] > mu[i]);
      CHECK(a.roots[i + offset] < mu[i + 1]);
    }
    if (regime == Regime::kLT1) CHECK(a.roots.back() > mu.back());
    // Backward error of each root at the double-precision level.
    for (double x : a.roots) {
      double scale = 0.0;
      double power = 1.0;
      for (double c : r.coeffs()) {
        scale += std::abs(c) * power;
        power *= std::abs(x);
      }
      CHECK(std::abs(r.eval_accurate(x)) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("p and r alternate in sign on the ascending poles") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 300; ++k) {
    const BltParams p = testing::random_params(rng, 8);
    const Polynomial pp = build_p(p.alpha, p.lambda);
    const Polynomial r = r_of(p);
    const std::vector<double> mu = ascending_mu(p);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const double beta = pp(mu[i]);
      if (i % 2 == 0) {
        CHECK(beta > 0.0);
      } else {
        CHECK(beta < 0.0);
      }
      CHECK(r(mu[i]) == Approx(mu[i] * beta).epsilon(1e-9));
    }
  }
}
