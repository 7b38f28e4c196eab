#include <doctest.h>

#include <cmath>
#include <random>

#include "blt/errors.hpp"
#include "blt/genfun.hpp"
#include "support/draws.hpp"
#include "support/oracles.hpp"

using namespace blt;
using doctest::Approx;

namespace {

void check_coeffs(const Polynomial& p, std::vector<double> expected) {
  REQUIRE(p.coeffs().size() == expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k) {
    CHECK(std::abs(p.coeffs()[k] - expected[k]) < 1e-14);
  }
}

}  // namespace

TEST_CASE("genfun_of gives r over q") {
  const RationalGF f = genfun_of({{0.2, 0.1}, {0.8, 0.4}});
  check_coeffs(f.num(), {1.0, -0.9, 0.16});
  check_coeffs(f.den(), {1.0, -1.2, 0.32});
  CHECK(f(0.0) == 1.0);

  const RationalGF id = genfun_of({{0.0}, {0.5}});
  check_coeffs(id.num(), {1.0, -0.5});
  check_coeffs(id.den(), {1.0, -0.5});

  const RationalGF worked = genfun_of({{0.4, 0.2}, {0.8, 0.4}});
  check_coeffs(worked.num(), {1.0, -0.6});
  check_coeffs(worked.den(), {1.0, -1.2, 0.32});
}

TEST_CASE("RationalGF normalizes the denominator") {
  const RationalGF g(Polynomial({2.0, 4.0}), Polynomial({2.0, -1.0}));
  CHECK(g.den().coeffs()[0] == 1.0);
  CHECK(g.num().coeffs()[0] == 1.0);
  try {
    RationalGF(Polynomial({1.0}), Polynomial({0.0, 1.0}));
    FAIL("expected NonUnitConstant");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonUnitConstant);
  }
}

TEST_CASE("reciprocal swaps and renormalizes") {
  const RationalGF f(Polynomial({1.0, -0.6}), Polynomial({1.0, -1.2, 0.32}));
  const RationalGF g = reciprocal(f);
  check_coeffs(g.num(), {1.0, -1.2, 0.32});
  check_coeffs(g.den(), {1.0, -0.6});
  const RationalGF back = reciprocal(g);
  check_coeffs(back.num(), {1.0, -0.6});
  check_coeffs(back.den(), {1.0, -1.2, 0.32});

  const RationalGF one(Polynomial({1.0}), Polynomial({1.0}));
  check_coeffs(reciprocal(one).num(), {1.0});

  try {
    reciprocal(RationalGF(Polynomial({0.0, 1.0}), Polynomial({1.0})));
    FAIL("expected NonUnitConstant");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonUnitConstant);
  }
}

TEST_CASE("maclaurin coefficients") {
  const BltParams worked{{0.4, 0.2}, {0.8, 0.4}};
  const auto c = maclaurin(genfun_of(worked), 4);
  const std::vector<double> fwd{1.0, 0.6, 0.4, 0.288};
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(c[k] - fwd[k]) < 1e-15);
  const auto ch = maclaurin(reciprocal(genfun_of(worked)), 4);
  const std::vector<double> inv{1.0, -0.6, -0.04, -0.024};
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(ch[k] - inv[k]) < 1e-15);
  const auto unit = maclaurin(RationalGF(Polynomial({1.0}), Polynomial({1.0})), 5);
  CHECK(unit == std::vector<double>{1.0, 0.0, 0.0, 0.0, 0.0});
}

TEST_CASE("series_product_check") {
  const BltParams worked{{0.4, 0.2}, {0.8, 0.4}};
  const auto c = toeplitz_coeffs(worked, 4);
  const auto ch = toeplitz_coeffs(invert_params(worked).as_blt(), 4);
  CHECK(series_product_check(c, ch, std::vector<double>{1.0, 0.0, 0.0, 0.0}) <= 1e-12);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::vector<double> a(32), b(32);
  for (double& v : a) v = g(rng);
  for (double& v : b) v = g(rng);
  const auto conv = convolve_truncated(a, b);
  const Eigen::MatrixXd dense = testing::toeplitz_lower(a) * testing::toeplitz_lower(b);
  for (std::size_t t = 0; t < 32; ++t) {
    CHECK(std::abs(conv[t] - dense(static_cast<Eigen::Index>(t), 0)) < 1e-12);
  }
  std::vector<double> e(32, 0.0);
  e[0] = 1.0;
  CHECK(series_product_check(a, e, a) == 0.0);

  try {
    series_product_check(a, std::vector<double>{1.0}, a);
    FAIL("expected LengthMismatch");
  } catch (const Error& e2) {
    CHECK(e2.code() == ErrorCode::kLengthMismatch);
  }
}

TEST_CASE("generating-function properties over random draws") {
  std::mt19937_64 rng(71);
  std::vector<double> e(256, 0.0);
  e[0] = 1.0;
  for (int k = 0; k < 200; ++k) {
    const BltParams p = testing::random_params(rng, 8);
    const RationalGF f = genfun_of(p);
    const RationalGF fh = reciprocal(f);
    CHECK(series_product_check(maclaurin(f, 256), maclaurin(fh, 256), e) < 1e-10);

    const auto direct = toeplitz_coeffs(p, 256);
    const auto series = maclaurin(f, 256);
    double worst = 0.0;
    for (std::size_t t = 0; t < 256; ++t) worst = std::max(worst, std::abs(direct[t] - series[t]));
    // r and q carry rounded coefficients; with many clustered decays their
    // series drifts from the exact one by more than 1e-12.
    CHECK(worst < (p.degree() <= 4 ? 1e-12 : 1e-10));

    const Regime regime = regime_of(p);
    const int d = static_cast<int>(p.degree());
    CHECK(f.num().degree() == (regime == Regime::kEQ1 ? d - 1 : d));
    CHECK(is_coprime(f));

    const InverseBltParams inv = invert_params(p);
    for (int s = 0; s < 64; ++s) {
      const double x = -0.9 + 1.8 * s / 63.0;
      CHECK(partial_fraction_value(inv, x) ==
            Approx(fh.num()(x) / fh.den()(x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("is_coprime detects a shared root") {
  CHECK_FALSE(is_coprime(RationalGF(Polynomial({1.0, -0.5}), Polynomial({1.0, -2.5, 1.0}))));
  CHECK(is_coprime(RationalGF(Polynomial({1.0, -0.9, 0.16}), Polynomial({1.0, -1.2, 0.32}))));
}
