#include <doctest.h>

#include <cmath>
#include <random>

#include "blt/diff.hpp"
#include "blt/errors.hpp"
#include "support/draws.hpp"

using namespace blt;
using doctest::Approx;

namespace {

double relative_deviation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("degree-1 Jacobian is exact") {
  Eigen::Matrix2d expected;
  expected << -1, 0, -1, 1;
  const auto implicit = jacobian_implicit({{0.5}, {0.8}});
  CHECK(implicit.method == JacobianMethod::kImplicit);
  CHECK((implicit.matrix - expected).cwiseAbs().maxCoeff() <= 1e-12);
  const auto fd = jacobian_fd({{0.5}, {0.8}});
  CHECK(fd.method == JacobianMethod::kFiniteDifference);
  CHECK((fd.matrix - expected).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("degree-2 Jacobian matches central differences") {
  const BltParams p{{0.2, 0.1}, {0.8, 0.4}};
  CHECK(relative_deviation(jacobian_implicit(p).matrix, jacobian_fd(p).matrix) <= 1e-5);
}

TEST_CASE("finite differences converge at second order") {
  const BltParams p{{0.2, 0.1}, {0.8, 0.4}};
  const Eigen::MatrixXd exact = jacobian_implicit(p).matrix;
  const double e1 = (jacobian_fd(p, 1e-3).matrix - exact).cwiseAbs().maxCoeff();
  const double e2 = (jacobian_fd(p, 5e-4).matrix - exact).cwiseAbs().maxCoeff();
  CHECK(e1 / e2 == Approx(4.0).epsilon(0.1));
}

TEST_CASE("Jacobian preconditions") {
  try {
    jacobian_implicit({{0.4, 0.2}, {0.8, 0.4}});
    FAIL("expected DegenerateRegime");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateRegime);
  }
  try {
    // alpha sits 1e-7 inside the boundary, so a 1e-6 step leaves the region.
    jacobian_fd({{1e-7}, {0.5}});
    FAIL("expected PerturbationInvalid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kPerturbationInvalid);
  }
}

TEST_CASE("implicit Jacobian on random draws") {
  std::mt19937_64 rng(109);
  for (int k = 0; k < 100; ++k) {
    const std::size_t d = 1 + k % 6;
    const Regime regime = (k % 4 == 3 && d > 1) ? Regime::kGT1 : Regime::kLT1;
    const BltParams p = testing::random_params(rng, d, regime);
    const Eigen::MatrixXd j = jacobian_implicit(p).matrix;
    CHECK(relative_deviation(j, jacobian_fd(p).matrix) <= 1e-5);
    // sum(alpha_hat) = -sum(alpha) exactly.
    const Eigen::RowVectorXd col_sums = j.topRows(d).colwise().sum();
    for (std::size_t c = 0; c < d; ++c) CHECK(col_sums(c) == Approx(-1.0).epsilon(1e-8));
    for (std::size_t c = d; c < 2 * d; ++c) CHECK(std::abs(col_sums(c)) <= 1e-8);
  }
}

TEST_CASE("Jacobian columns follow the input order") {
  const BltParams p{{0.1, 0.2, 0.15}, {0.3, 0.85, 0.6}};
  const BltParams sorted = canonical(p);
  const Eigen::MatrixXd a = jacobian_implicit(p).matrix;
  const Eigen::MatrixXd b = jacobian_implicit(sorted).matrix;
  // Input index i of p sits at position perm[i] of the sorted parameters.
  const std::size_t perm[3] = {2, 0, 1};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK((a.col(i) - b.col(perm[i])).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((a.col(3 + i) - b.col(3 + perm[i])).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("loss gradient matches finite differences") {
  const WorkloadSpec w2 = WorkloadSpec::prefix_sum(2);
  const LossGradient g = loss_gradient({{0.5}, {0.8}}, w2);
  const LossGradient f = loss_gradient_fd({{0.5}, {0.8}}, w2);
  CHECK(g.value == Approx(1.25).epsilon(1e-12));
  for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(g.gradient[k] - f.gradient[k]) <= 1e-6);

  std::mt19937_64 rng(113);
  for (int k = 0; k < 40; ++k) {
    const BltParams p = testing::random_params(rng, 1 + k % 4, Regime::kLT1);
    for (const Objective& obj :
         {Objective::max(), Objective::frobenius(), Objective::soft_max(0.05)}) {
      const WorkloadSpec w = WorkloadSpec::prefix_sum(32);
      const LossGradient a = loss_gradient(p, w, obj);
      const LossGradient b = loss_gradient_fd(p, w, obj);
      CHECK(a.value == Approx(objective_value(p, w, obj)).epsilon(1e-12));
      double scale = 1.0;
      for (double v : b.gradient) scale = std::max(scale, std::abs(v));
      for (std::size_t c = 0; c < a.gradient.size(); ++c) {
        CHECK(std::abs(a.gradient[c] - b.gradient[c]) <= 1e-4 * scale);
      }
    }
  }
}
