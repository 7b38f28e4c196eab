#ifndef BLT_OPT_HPP_
#define BLT_OPT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "blt/blt.hpp"
#include "blt/loss.hpp"

namespace blt {

struct OptConfig {
  std::size_t d = 2;
  std::size_t n = 64;
  Objective objective = Objective::max();
  // Explicit workload; prefix sums of length n when unset.
  std::optional<WorkloadSpec> workload;
  // Barrier weight at step k is barrier_weight * barrier_decay^k.
  double barrier_weight = 1e-3;
  double barrier_decay = 0.99;
  std::size_t steps = 2000;
  double learning_rate = 1e-2;
  double momentum = 0.9;
  // Stops early once the objective gradient norm falls below this value and
  // the barrier weight has decayed below it too.
  double gradient_tolerance = 0.0;
  std::uint64_t seed = 0;
  // Random initialization when unset.
  std::optional<BltParams> init;
  // Record every k-th iterate (the first and last are always recorded).
  std::size_t trace_every = 1;
};

struct OptRecord {
  std::size_t iteration = 0;
  double loss = 0.0;         // objective value
  double barrier = 0.0;      // weighted barrier value
  double gradient_norm = 0.0;  // of objective + barrier
  BltParams params;
};

struct OptTrace {
  std::vector<OptRecord> records;
};

struct OptResult {
  BltParams params;           // best objective seen, canonical order
  InverseBltParams inverse;
  double loss = 0.0;
  double gradient_norm = 0.0;  // objective gradient at `params`
  std::size_t iterations = 0;
  OptTrace trace;
};

// Seeded starting point: decays with 1 - lambda_i log-spaced in (1/n, 1)
// and alpha_i = lambda_i / (2d), so that sum(alpha/lambda) = 1/2.
BltParams initial_params(std::size_t d, std::size_t n, std::uint64_t seed);

// -sum log(alpha) - sum log(lambda) - sum log(1 - lambda) - log(1 - sum alpha)
// - log(1 - sum alpha/lambda) - sum_{i<j} log(lambda_i - lambda_j), for
// lambda in descending order. +inf outside the feasible region.
double barrier_value(const BltParams& params);
std::vector<double> barrier_gradient(const BltParams& params);

// Momentum gradient descent on objective + weight * barrier, kept strictly
// inside the LT1 region.
OptResult optimize(const OptConfig& cfg);

}  // namespace blt

#endif  // BLT_OPT_HPP_
