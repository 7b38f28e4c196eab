#include <doctest.h>

#include "blt/io.hpp"

using namespace blt;

TEST_CASE("parameter JSON round trip") {
  const BltParams p{{0.4, 0.2}, {0.8, 0.4}};
  const auto j = io::to_json(p);
  const BltParams back = io::params_from_json(j);
  CHECK(back.alpha == p.alpha);
  CHECK(back.lambda == p.lambda);

  const InverseBltParams inv = invert_params(p);
  const auto ji = io::to_json(inv);
  CHECK(ji["regime"] == "EQ1");
  const InverseBltParams inv_back = io::inverse_from_json(ji);
  CHECK(inv_back.alpha_hat == inv.alpha_hat);
  CHECK(inv_back.lambda_hat == inv.lambda_hat);
  CHECK(inv_back.regime == Regime::kEQ1);
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(io::parse("{\"alpha\": [0.1,"), io::ParseError);
  CHECK_THROWS_AS(io::params_from_json(io::parse("{\"alpha\": [0.1]}")), io::ParseError);
  CHECK_THROWS_AS(io::params_from_json(io::parse("{\"alpha\": \"x\", \"lambda\": [0.5]}")),
                  io::ParseError);
  CHECK_THROWS_AS(io::params_from_json(io::parse("[1, 2]")), io::ParseError);
  CHECK_THROWS_AS(
      io::inverse_from_json(io::parse(
          "{\"alpha_hat\": [-0.1], \"lambda_hat\": [0.2], \"regime\": \"XX\"}")),
      io::ParseError);
}

TEST_CASE("loss report and trace records serialize") {
  const LossReport r = max_loss({{0.5}, {0.8}}, WorkloadSpec::prefix_sum(2));
  const auto j = io::to_json(r, true);
  CHECK(j["loss"].get<double>() == doctest::Approx(1.25));
  CHECK(j["per_row_norms"].size() == 2);
  CHECK_FALSE(io::to_json(r).contains("per_row_norms"));

  OptRecord rec;
  rec.iteration = 3;
  rec.params = {{0.1}, {0.5}};
  const auto jr = io::to_json(rec);
  CHECK(jr["iteration"] == 3);
  CHECK(jr["alpha"][0].get<double>() == 0.1);
}
