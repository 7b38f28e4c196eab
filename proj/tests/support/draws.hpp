#ifndef BLT_TESTS_SUPPORT_DRAWS_HPP_
#define BLT_TESTS_SUPPORT_DRAWS_HPP_

#include <algorithm>
#include <cstddef>
#include <random>
#include <vector>

#include "blt/blt.hpp"

namespace blt::testing {

// Random strict-valid parameters in the requested regime, lambda descending
// in (0.02, 0.98) with gaps of at least 0.01.
//   LT1: sum(alpha/lambda) uniform in (0.05, 0.95)
//   EQ1: sum(alpha/lambda) = 1 up to rounding
//   GT1: sum(alpha/lambda) uniform in (1.05, 3), rejected unless sum(alpha) < 1
inline BltParams random_params(std::mt19937_64& rng, std::size_t d, Regime regime) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    std::vector<double> lambda(d);
    for (double& l : lambda) l = 0.02 + 0.96 * unit(rng);
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    bool separated = true;
    for (std::size_t i = 1; i < d; ++i) {
      if (lambda[i - 1] - lambda[i] < 0.01) separated = false;
    }
    if (!separated) continue;
    std::vector<double> weight(d);
    for (double& w : weight) w = 0.1 + 0.9 * unit(rng);
    double target = 1.0;
    if (regime == Regime::kLT1) target = 0.05 + 0.9 * unit(rng);
    if (regime == Regime::kGT1) target = 1.05 + 1.95 * unit(rng);
    double ratio = 0.0;
    for (std::size_t i = 0; i < d; ++i) ratio += weight[i] / lambda[i];
    BltParams p;
    p.lambda = lambda;
    double alpha_sum = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      p.alpha.push_back(target * weight[i] / ratio);
      alpha_sum += p.alpha.back();
    }
    if (!(alpha_sum < 1.0)) continue;
    if (regime_of(p) != regime) continue;
    return p;
  }
}

// Regime drawn uniformly, d uniform in [1, max_d].
inline BltParams random_params(std::mt19937_64& rng, std::size_t max_d) {
  std::uniform_int_distribution<std::size_t> degree(1, max_d);
  std::uniform_int_distribution<int> which(0, 2);
  const std::size_t d = degree(rng);
  Regime regime = static_cast<Regime>(which(rng));
  if (d == 1 && regime == Regime::kGT1) regime = Regime::kLT1;
  return random_params(rng, d, regime);
}

}  // namespace blt::testing

#endif  // BLT_TESTS_SUPPORT_DRAWS_HPP_
