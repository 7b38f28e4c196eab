#include <doctest.h>

#include <cmath>

#include "blt/diff.hpp"
#include "blt/errors.hpp"
#include "blt/opt.hpp"

using namespace blt;
using doctest::Approx;

TEST_CASE("initial point is feasible and seeded") {
  for (std::size_t d : {1, 2, 4, 8}) {
    const BltParams p = initial_params(d, 256, 3);
    const ValidationReport r = validate(p, ValidationMode::kStrict);
    CHECK(r.valid);
    CHECK(r.regime == Regime::kLT1);
    CHECK(r.ratio_sum == Approx(0.5));
    CHECK(std::isfinite(barrier_value(p)));
  }
  CHECK(initial_params(3, 64, 1).lambda == initial_params(3, 64, 1).lambda);
  CHECK(initial_params(3, 64, 1).lambda != initial_params(3, 64, 2).lambda);
}

TEST_CASE("barrier gradient matches finite differences") {
  const BltParams p{{0.1, 0.2, 0.05}, {0.9, 0.6, 0.3}};
  const auto g = barrier_gradient(p);
  const double h = 1e-7;
  for (std::size_t k = 0; k < 6; ++k) {
    BltParams up = p, down = p;
    auto& u = k < 3 ? up.alpha[k] : up.lambda[k - 3];
    auto& v = k < 3 ? down.alpha[k] : down.lambda[k - 3];
    u += h;
    v -= h;
    CHECK(g[k] == Approx((barrier_value(up) - barrier_value(down)) / (2 * h)).epsilon(1e-5));
  }
  CHECK(std::isinf(barrier_value({{0.5, 0.2}, {0.4, 0.3}})));
}

TEST_CASE("degree-1 optimization reaches the analytic optimum") {
  OptConfig cfg;
  cfg.d = 1;
  cfg.n = 2;
  cfg.seed = 1;
  const OptResult r = optimize(cfg);
  CHECK(r.gradient_norm <= 1e-6);
  CHECK(r.loss <= 1.25);
  CHECK(r.params.alpha[0] == Approx(0.5).epsilon(1e-6));
  for (const auto& rec : r.trace.records) {
    const ValidationReport v = validate(rec.params, ValidationMode::kStrict);
    CHECK(v.valid);
    CHECK(v.regime == Regime::kLT1);
  }
  const OptResult again = optimize(cfg);
  CHECK(again.loss == r.loss);
  CHECK(again.params.alpha == r.params.alpha);
  CHECK(again.params.lambda == r.params.lambda);
}

TEST_CASE("zero steps return the given start") {
  OptConfig cfg;
  cfg.steps = 0;
  cfg.init = BltParams{{0.1, 0.05}, {0.9, 0.5}};
  const OptResult r = optimize(cfg);
  CHECK(r.params.alpha == cfg.init->alpha);
  CHECK(r.params.lambda == cfg.init->lambda);
  CHECK(r.iterations == 0);
}

TEST_CASE("best loss never exceeds the initial loss") {
  OptConfig cfg;
  cfg.d = 3;
  cfg.n = 128;
  cfg.steps = 200;
  cfg.seed = 4;
  const OptResult r = optimize(cfg);
  CHECK(r.loss <= r.trace.records.front().loss);
}

TEST_CASE("a second channel does not hurt") {
  OptConfig one;
  one.d = 1;
  one.n = 64;
  one.steps = 3000;
  OptConfig two = one;
  two.d = 2;
  const double l1 = optimize(one).loss;
  const double l2 = optimize(two).loss;
  CHECK(l2 <= 1.02 * l1);
}

TEST_CASE("optimizer rejects bad configurations") {
  OptConfig cfg;
  cfg.init = BltParams{{0.6, 0.6}, {0.8, 0.4}};
  try {
    optimize(cfg);
    FAIL("expected InitInvalid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInitInvalid);
  }
  OptConfig soft;
  soft.objective = Objective::soft_max(0.0);
  CHECK_THROWS_AS(optimize(soft), Error);
}

TEST_CASE("frobenius and soft-max objectives also run") {
  for (const Objective& obj : {Objective::frobenius(), Objective::soft_max(0.1)}) {
    OptConfig cfg;
    cfg.d = 2;
    cfg.n = 32;
    cfg.steps = 100;
    cfg.objective = obj;
    const OptResult r = optimize(cfg);
    CHECK(std::isfinite(r.loss));
    CHECK(r.loss <= r.trace.records.front().loss);
  }
}
