#include "blt/opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "blt/diff.hpp"
#include "blt/errors.hpp"

namespace blt {

BltParams initial_params(std::size_t d, std::size_t n, std::uint64_t seed) {
  if (d == 0 || n == 0) throw Error(ErrorCode::kInitInvalid, "d and n must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  const double log_n = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  BltParams p;
  for (std::size_t i = 0; i < d; ++i) {
    const double fraction =
        static_cast<double>(d - i) / static_cast<double>(d + 1) * (1.0 + jitter(rng));
    const double lambda = std::clamp(1.0 - std::exp(-log_n * fraction), 1e-4, 1.0 - 1e-4);
    p.lambda.push_back(lambda);
  }
  std::sort(p.lambda.begin(), p.lambda.end(), std::greater<>());
  for (std::size_t i = 1; i < d; ++i) {
    // Keep the jittered decays separated.
    if (p.lambda[i - 1] - p.lambda[i] < 1e-6) p.lambda[i] = p.lambda[i - 1] * (1.0 - 1e-3);
  }
  for (double l : p.lambda) p.alpha.push_back(l / (2.0 * static_cast<double>(d)));
  return p;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool descending(const BltParams& p) {
  for (std::size_t i = 1; i < p.degree(); ++i) {
    if (!(p.lambda[i - 1] - p.lambda[i] > tol::kSeparation)) return false;
  }
  return true;
}

bool feasible(const BltParams& p) {
  if (!descending(p)) return false;
  const ValidationReport r = validate(p, ValidationMode::kStrict);
  if (!r || *r.regime != Regime::kLT1) return false;
  // A vanishing channel makes lambda_hat collide with lambda; such points
  // have no well-separated inverse and no implicit Jacobian.
  try {
    invert_params(p);
  } catch (const Error&) {
    return false;
  }
  return true;
}

}  // namespace

double barrier_value(const BltParams& p) {
  if (!feasible(p)) return kInf;
  const std::size_t d = p.degree();
  double value = 0.0;
  double alpha_sum = 0.0;
  double ratio = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    value -= std::log(p.alpha[i]) + std::log(p.lambda[i]) + std::log1p(-p.lambda[i]);
    alpha_sum += p.alpha[i];
    ratio += p.alpha[i] / p.lambda[i];
    for (std::size_t j = i + 1; j < d; ++j) value -= std::log(p.lambda[i] - p.lambda[j]);
  }
  value -= std::log1p(-alpha_sum) + std::log1p(-ratio);
  return value;
}

std::vector<double> barrier_gradient(const BltParams& p) {
  const std::size_t d = p.degree();
  std::vector<double> g(2 * d, 0.0);
  double alpha_sum = 0.0;
  double ratio = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    alpha_sum += p.alpha[i];
    ratio += p.alpha[i] / p.lambda[i];
  }
  const double slack_sum = 1.0 - alpha_sum;
  const double slack_ratio = 1.0 - ratio;
  for (std::size_t i = 0; i < d; ++i) {
    const double a = p.alpha[i];
    const double l = p.lambda[i];
    g[i] = -1.0 / a + 1.0 / slack_sum + 1.0 / (l * slack_ratio);
    g[d + i] = -1.0 / l + 1.0 / (1.0 - l) - a / (l * l * slack_ratio);
    for (std::size_t j = 0; j < d; ++j) {
      if (j == i) continue;
      // d/dl_i of -log|l_i - l_j|.
      g[d + i] -= 1.0 / (l - p.lambda[j]);
    }
  }
  return g;
}

OptResult optimize(const OptConfig& cfg) {
  if (cfg.n == 0 || !(cfg.learning_rate > 0.0) || !(cfg.barrier_weight >= 0.0) ||
      !(cfg.barrier_decay > 0.0 && cfg.barrier_decay <= 1.0) ||
      !(cfg.momentum >= 0.0 && cfg.momentum < 1.0)) {
    throw Error(ErrorCode::kInitInvalid, "invalid optimizer configuration");
  }
  if (cfg.objective.kind == Objective::Kind::kSoftMax && !(cfg.objective.temperature > 0.0)) {
    throw Error(ErrorCode::kInitInvalid, "soft-max temperature must be positive");
  }
  const WorkloadSpec workload = cfg.workload.value_or(WorkloadSpec::prefix_sum(cfg.n));

  BltParams x = cfg.init ? canonical(*cfg.init) : initial_params(cfg.d, cfg.n, cfg.seed);
  if (!feasible(x)) {
    throw Error(ErrorCode::kInitInvalid,
                "initial parameters are not strictly inside the LT1 region");
  }
  const std::size_t d = x.degree();
  const std::size_t every = std::max<std::size_t>(cfg.trace_every, 1);

  auto total_gradient = [&](const BltParams& p, double weight, LossGradient& lg,
                            std::vector<double>& g) {
    lg = loss_gradient(p, workload, cfg.objective);
    g = lg.gradient;
    if (weight > 0.0) {
      const auto gb = barrier_gradient(p);
      for (std::size_t k = 0; k < g.size(); ++k) g[k] += weight * gb[k];
    }
    for (double v : g) {
      if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "non-finite gradient");
    }
    if (!std::isfinite(lg.value)) throw Error(ErrorCode::kNonFinite, "non-finite objective");
  };
  auto norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return std::sqrt(s);
  };

  OptResult result;
  std::vector<double> velocity(2 * d, 0.0);
  double weight = cfg.barrier_weight;
  LossGradient lg;
  std::vector<double> g;
  total_gradient(x, weight, lg, g);

  BltParams best = x;
  double best_loss = lg.value;
  double best_grad = norm(lg.gradient);

  std::size_t k = 0;
  for (;; ++k) {
    const double barrier = weight > 0.0 ? weight * barrier_value(x) : 0.0;
    if (k % every == 0 || k == cfg.steps) {
      result.trace.records.push_back({k, lg.value, barrier, norm(g), x});
    }
    if (lg.value < best_loss) {
      best = x;
      best_loss = lg.value;
      best_grad = norm(lg.gradient);
    }
    if (k == cfg.steps) break;
    if (cfg.gradient_tolerance > 0.0 && norm(lg.gradient) <= cfg.gradient_tolerance &&
        weight <= cfg.gradient_tolerance) {
      if (k % every != 0) result.trace.records.push_back({k, lg.value, barrier, norm(g), x});
      break;
    }

    for (std::size_t c = 0; c < 2 * d; ++c) {
      velocity[c] = cfg.momentum * velocity[c] - cfg.learning_rate * g[c];
    }
    // Shrink the step until it stays strictly feasible.
    BltParams next;
    double shrink = 1.0;
    bool moved = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      next = x;
      for (std::size_t i = 0; i < d; ++i) {
        next.alpha[i] += shrink * velocity[i];
        next.lambda[i] += shrink * velocity[d + i];
      }
      if (feasible(next)) {
        moved = true;
        break;
      }
      shrink *= 0.5;
    }
    if (!moved) {
      std::fill(velocity.begin(), velocity.end(), 0.0);
      next = x;
    } else if (shrink < 1.0) {
      for (double& v : velocity) v *= shrink;
    }
    x = std::move(next);
    weight *= cfg.barrier_decay;
    total_gradient(x, weight, lg, g);
  }

  result.params = best;
  result.inverse = invert_params(best);
  result.loss = best_loss;
  result.gradient_norm = best_grad;
  result.iterations = k;
  return result;
}

}  // namespace blt
