#include "blt/diff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "blt/errors.hpp"
#include "blt/poly.hpp"

namespace blt {

namespace {

const BltParams& require_invertible(const BltParams& params,
                                    ValidationReport& report) {
  report = validate(params, ValidationMode::kStrict);
  if (!report) throw Error(ErrorCode::kInvalidParams, report.summary());
  if (*report.regime == Regime::kEQ1) {
    throw Error(ErrorCode::kDegenerateRegime,
                "sum(alpha/lambda) = 1: the inverse has a zero decay and the "
                "map is not differentiable there");
  }
  return params;
}

// Positions of the input pairs after canonical sorting: canon[pos[o]] is
// input pair o.
std::vector<std::size_t> canonical_positions(const BltParams& params) {
  const std::size_t d = params.degree();
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return params.lambda[a] > params.lambda[b];
  });
  std::vector<std::size_t> pos(d);
  for (std::size_t k = 0; k < d; ++k) pos[order[k]] = k;
  return pos;
}

}  // namespace

InversionJacobian jacobian_implicit(const BltParams& input) {
  ValidationReport report;
  require_invertible(input, report);
  const BltParams params = canonical(input);
  const InverseBltParams inv = invert_params(params);
  const std::size_t d = params.degree();
  const auto& alpha = params.alpha;
  const auto& lambda = params.lambda;

  std::vector<double> rc(d + 1, 0.0);
  {
    const Polynomial q = build_q(lambda);
    const Polynomial p = build_p(alpha, lambda);
    for (std::size_t k = 0; k < q.coeffs().size(); ++k) rc[k] += q.coeffs()[k];
    for (std::size_t k = 0; k < p.coeffs().size() && k < d; ++k) {
      rc[k + 1] += p.coeffs()[k];
    }
  }
  const Polynomial r(rc);
  const Polynomial slope = r.derivative();

  // dlh(i, c): derivative of lambda_hat_i w.r.t. canonical coordinate c,
  // where c < d indexes alpha and c >= d indexes lambda.
  Eigen::MatrixXd dlh(d, 2 * d);
  std::vector<double> factor(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double nu = 1.0 / inv.lambda_hat[i];
    const double dr = slope.eval_accurate(nu);
    // r'(nu_i) = r_d prod_{j != i} (nu_i - nu_j); compare against the same
    // product with every gap replaced by the larger magnitude involved.
    double scale = std::abs(r.leading());
    for (std::size_t j = 0; j < d; ++j) {
      if (j == i) continue;
      scale *= std::max({1.0, std::abs(nu), 1.0 / std::abs(inv.lambda_hat[j])});
    }
    if (std::abs(dr) < tol::kSeparation * scale) {
      std::ostringstream msg;
      msg << "r'(" << nu << ") = " << dr << " is numerically zero";
      throw Error(ErrorCode::kNearDoubleRoot, msg.str());
    }
    for (std::size_t k = 0; k < d; ++k) factor[k] = 1.0 - lambda[k] * nu;
    for (std::size_t j = 0; j < d; ++j) {
      double without_j = 1.0;
      for (std::size_t k = 0; k < d; ++k) {
        if (k != j) without_j *= factor[k];
      }
      // d/dlambda_j of x p(x): -x^2 sum_{m != j} alpha_m prod_{k != m, j}.
      double cross = 0.0;
      for (std::size_t m = 0; m < d; ++m) {
        if (m == j) continue;
        double prod = alpha[m];
        for (std::size_t k = 0; k < d; ++k) {
          if (k != m && k != j) prod *= factor[k];
        }
        cross += prod;
      }
      const double dr_dalpha = nu * without_j;
      const double dr_dlambda = -nu * without_j - nu * nu * cross;
      // lambda_hat = 1/nu, d nu = -(dr/dtheta) / r'(nu).
      const double chain = inv.lambda_hat[i] * inv.lambda_hat[i] / dr;
      dlh(i, j) = chain * dr_dalpha;
      dlh(i, d + j) = chain * dr_dlambda;
    }
  }

  // alpha_hat_i = prod_j (lh_i - l_j) / prod_{k != i} (lh_i - lh_k).
  Eigen::MatrixXd canon(2 * d, 2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    const double lh = inv.lambda_hat[i];
    for (std::size_t c = 0; c < 2 * d; ++c) {
      double log_derivative = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double dl = (c == d + j) ? 1.0 : 0.0;
        log_derivative += (dlh(i, c) - dl) / (lh - lambda[j]);
      }
      for (std::size_t k = 0; k < d; ++k) {
        if (k != i) {
          log_derivative -= (dlh(i, c) - dlh(k, c)) / (lh - inv.lambda_hat[k]);
        }
      }
      canon(i, c) = inv.alpha_hat[i] * log_derivative;
      canon(d + i, c) = dlh(i, c);
    }
  }

  const auto pos = canonical_positions(input);
  InversionJacobian out;
  out.method = JacobianMethod::kImplicit;
  out.matrix.resize(2 * d, 2 * d);
  for (std::size_t o = 0; o < d; ++o) {
    out.matrix.col(o) = canon.col(pos[o]);
    out.matrix.col(d + o) = canon.col(d + pos[o]);
  }
  return out;
}

InversionJacobian jacobian_fd(const BltParams& params, std::optional<double> h) {
  ValidationReport report;
  require_invertible(params, report);
  const Regime regime = *report.regime;
  const std::size_t d = params.degree();
  const double step = h.value_or(1e-6);

  auto flatten = [d](const InverseBltParams& inv) {
    Eigen::VectorXd v(2 * d);
    for (std::size_t i = 0; i < d; ++i) {
      v(i) = inv.alpha_hat[i];
      v(d + i) = inv.lambda_hat[i];
    }
    return v;
  };
  auto evaluate = [&](const BltParams& p) {
    const ValidationReport r = validate(p, ValidationMode::kStrict);
    if (!r || *r.regime != regime) {
      throw Error(ErrorCode::kPerturbationInvalid,
                  "perturbed parameters leave the valid region" +
                      (r ? std::string() : ": " + r.summary()));
    }
    return flatten(invert_params(p));
  };

  InversionJacobian out;
  out.method = JacobianMethod::kFiniteDifference;
  out.matrix.resize(2 * d, 2 * d);
  for (std::size_t c = 0; c < 2 * d; ++c) {
    BltParams plus = params;
    BltParams minus = params;
    double& up = c < d ? plus.alpha[c] : plus.lambda[c - d];
    double& down = c < d ? minus.alpha[c] : minus.lambda[c - d];
    const double hk = step * (1.0 + std::abs(up));
    up += hk;
    down -= hk;
    out.matrix.col(c) = (evaluate(plus) - evaluate(minus)) / (2.0 * hk);
  }
  return out;
}

namespace {

// d(aggregate)/d(row norm t).
std::vector<double> aggregate_weights(const std::vector<double>& norms,
                                      const Objective& objective) {
  const std::size_t n = norms.size();
  std::vector<double> w(n, 0.0);
  if (n == 0) return w;
  switch (objective.kind) {
    case Objective::Kind::kMax: {
      const auto worst = std::max_element(norms.begin(), norms.end());
      w[static_cast<std::size_t>(worst - norms.begin())] = 1.0;
      break;
    }
    case Objective::Kind::kFrobenius: {
      const double rms = aggregate_row_norms(norms, objective);
      if (rms > 0.0) {
        for (std::size_t t = 0; t < n; ++t) {
          w[t] = norms[t] / (static_cast<double>(n) * rms);
        }
      }
      break;
    }
    case Objective::Kind::kSoftMax: {
      const double top = *std::max_element(norms.begin(), norms.end());
      double sum = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        w[t] = std::exp((norms[t] - top) / objective.temperature);
        sum += w[t];
      }
      for (double& v : w) v /= sum;
      break;
    }
  }
  return w;
}

// Gradient of the row aggregation with respect to the inverse column c_hat.
std::vector<double> gradient_wrt_inverse_column(const BltParams& params,
                                                const WorkloadSpec& workload,
                                                const std::vector<double>& norms,
                                                const std::vector<double>& weights) {
  const std::size_t n = workload.n();
  std::vector<double> g(n, 0.0);
  if (workload.kind() == WorkloadSpec::Kind::kPrefixSum) {
    const auto c_hat = inverse_column(params, n);
    std::vector<double> prefix(n);
    double running = 0.0;
    for (std::size_t j = 0; j < n; ++j) prefix[j] = running += c_hat[j];
    // d agg / d P_j = P_j sum_{t >= j} w_t / N_t, then suffix-summed.
    double tail_weight = 0.0;
    double tail = 0.0;
    for (std::size_t j = n; j-- > 0;) {
      if (norms[j] > 0.0) tail_weight += weights[j] / norms[j];
      tail += prefix[j] * tail_weight;
      g[j] = tail;
    }
    return g;
  }
  const auto c_hat = inverse_column(params, n);
  for (std::size_t t = 0; t < n; ++t) {
    if (weights[t] == 0.0 || norms[t] == 0.0) continue;
    const auto b = factor_row(params, workload, t);
    const double w = weights[t] / norms[t];
    // b_k = sum_{s=k}^{t} A[t,s] c_hat_{s-k}.
    for (std::size_t k = 0; k <= t; ++k) {
      if (b[k] == 0.0) continue;
      for (std::size_t s = k; s <= t; ++s) g[s - k] += w * b[k] * workload.at(t, s);
    }
  }
  return g;
}

}  // namespace

LossGradient loss_gradient(const BltParams& params, const WorkloadSpec& workload,
                           const Objective& objective) {
  const std::size_t d = params.degree();
  const std::size_t n = workload.n();
  const InversionJacobian jac = jacobian_implicit(params);
  const InverseBltParams inv = invert_params(params);

  const auto c = toeplitz_coeffs(params, n);
  const auto norms = factor_row_norms(params, workload);
  const double aggregate = aggregate_row_norms(norms, objective);
  double sens_sq = 0.0;
  for (double v : c) sens_sq += v * v;
  const double sens = std::sqrt(sens_sq);

  LossGradient out;
  out.value = sens * aggregate;
  out.gradient.assign(2 * d, 0.0);

  // Sensitivity is the norm of the first column.
  for (std::size_t i = 0; i < d; ++i) {
    double d_alpha = 0.0;
    double d_lambda = 0.0;
    double power = 1.0;       // lambda^(t-2)
    double power_prev = 0.0;  // lambda^(t-3)
    for (std::size_t t = 1; t < n; ++t) {
      d_alpha += c[t] * power;
      d_lambda += c[t] * params.alpha[i] * static_cast<double>(t - 1) * power_prev;
      power_prev = power;
      power *= params.lambda[i];
    }
    out.gradient[i] += aggregate * d_alpha / sens;
    out.gradient[d + i] += aggregate * d_lambda / sens;
  }

  const auto weights = aggregate_weights(norms, objective);
  const auto g_chat = gradient_wrt_inverse_column(params, workload, norms, weights);
  Eigen::VectorXd g_inv = Eigen::VectorXd::Zero(2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    const double ah = inv.alpha_hat[i];
    const double lh = inv.lambda_hat[i];
    double power = 1.0;
    double power_prev = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
      g_inv(i) += g_chat[j] * power;
      g_inv(d + i) += g_chat[j] * ah * static_cast<double>(j - 1) * power_prev;
      power_prev = power;
      power *= lh;
    }
  }
  const Eigen::VectorXd g_theta = jac.matrix.transpose() * g_inv;
  for (std::size_t k = 0; k < 2 * d; ++k) out.gradient[k] += sens * g_theta(static_cast<Eigen::Index>(k));
  return out;
}

LossGradient loss_gradient_fd(const BltParams& params, const WorkloadSpec& workload,
                              const Objective& objective, double h) {
  const std::size_t d = params.degree();
  LossGradient out;
  out.value = objective_value(params, workload, objective);
  out.gradient.resize(2 * d);
  for (std::size_t c = 0; c < 2 * d; ++c) {
    BltParams plus = params;
    BltParams minus = params;
    double& up = c < d ? plus.alpha[c] : plus.lambda[c - d];
    double& down = c < d ? minus.alpha[c] : minus.lambda[c - d];
    const double hk = h * (1.0 + std::abs(up));
    up += hk;
    down -= hk;
    out.gradient[c] = (objective_value(plus, workload, objective) -
                       objective_value(minus, workload, objective)) /
                      (2.0 * hk);
  }
  return out;
}

}  // namespace blt
