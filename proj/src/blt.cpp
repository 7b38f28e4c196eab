#include "blt/blt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "blt/errors.hpp"
#include "blt/poly.hpp"

namespace blt {

BltParams canonical(BltParams params) {
  const std::size_t d = params.lambda.size();
  if (params.alpha.size() != d) return params;
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return params.lambda[a] > params.lambda[b];
  });
  BltParams out;
  out.alpha.reserve(d);
  out.lambda.reserve(d);
  for (std::size_t i : order) {
    out.alpha.push_back(params.alpha[i]);
    out.lambda.push_back(params.lambda[i]);
  }
  return out;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << violations[i].constraint << " violated";
    if (!violations[i].detail.empty()) out << " (" << violations[i].detail << ")";
  }
  return out.str();
}

double ratio_sum(const BltParams& params) {
  double s = 0.0;
  for (std::size_t i = 0; i < params.lambda.size(); ++i) {
    s += params.alpha[i] / params.lambda[i];
  }
  return s;
}

Regime regime_of(const BltParams& params) {
  const double s = ratio_sum(params);
  if (std::abs(s - 1.0) <= tol::kDegeneracy) return Regime::kEQ1;
  return s < 1.0 ? Regime::kLT1 : Regime::kGT1;
}

ValidationReport validate(const BltParams& params, ValidationMode mode) {
  ValidationReport report;
  auto fail = [&](std::string constraint, std::string detail) {
    report.valid = false;
    report.violations.push_back({std::move(constraint), std::move(detail)});
  };
  auto entry = [](const char* name, std::size_t i, double v) {
    std::ostringstream s;
    s << name << "[" << i << "]=" << v;
    return s.str();
  };

  const std::size_t d = params.lambda.size();
  if (params.alpha.size() != d) {
    fail("|alpha| = |lambda|", "alpha has " + std::to_string(params.alpha.size()) +
                                   " entries, lambda has " + std::to_string(d));
    return report;
  }
  if (d == 0) {
    fail("degree >= 1", "empty parameter vectors");
    return report;
  }
  bool finite = true;
  for (std::size_t i = 0; i < d; ++i) {
    if (!std::isfinite(params.alpha[i])) {
      fail("finite alpha", entry("alpha", i, params.alpha[i]));
      finite = false;
    }
    if (!std::isfinite(params.lambda[i])) {
      fail("finite lambda", entry("lambda", i, params.lambda[i]));
      finite = false;
    }
  }
  if (!finite) return report;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      if (std::abs(params.lambda[i] - params.lambda[j]) <= tol::kSeparation) {
        fail("distinct lambda",
             entry("lambda", i, params.lambda[i]) + " vs " +
                 entry("lambda", j, params.lambda[j]));
      }
    }
  }
  if (mode == ValidationMode::kLenient) return report;

  double alpha_sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (!(params.alpha[i] > 0.0)) fail("alpha > 0", entry("alpha", i, params.alpha[i]));
    if (!(params.lambda[i] > 0.0 && params.lambda[i] < 1.0)) {
      fail("lambda in (0,1)", entry("lambda", i, params.lambda[i]));
    }
    alpha_sum += params.alpha[i];
  }
  if (!(alpha_sum < 1.0)) {
    std::ostringstream s;
    s << "sum(alpha)=" << alpha_sum;
    fail("sum(alpha) < 1", s.str());
  }
  if (report.valid) {
    report.ratio_sum = ratio_sum(params);
    report.regime = regime_of(params);
  }
  return report;
}

std::vector<double> toeplitz_coeffs(const BltParams& params, std::size_t n) {
  std::vector<double> c(n, 0.0);
  if (n == 0) return c;
  c[0] = 1.0;
  std::vector<double> channel = params.alpha;
  for (std::size_t k = 1; k < n; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < channel.size(); ++i) {
      sum += channel[i];
      channel[i] *= params.lambda[i];
    }
    c[k] = sum;
  }
  return c;
}

Eigen::MatrixXd materialize(const BltParams& params, std::size_t n,
                            std::size_t max_n) {
  if (n > max_n) {
    throw Error(ErrorCode::kSizeLimit, "n=" + std::to_string(n) +
                                           " exceeds the dense cap " +
                                           std::to_string(max_n));
  }
  const auto c = toeplitz_coeffs(params, n);
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  for (Eigen::Index k = 0; k < size; ++k) {
    for (Eigen::Index j = k; j < size; ++j) m(j, k) = c[j - k];
  }
  return m;
}

namespace {

void check_separated(std::span<const double> a, const char* a_name,
                     std::span<const double> b, const char* b_name,
                     bool same) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = same ? i + 1 : 0; j < b.size(); ++j) {
      if (std::abs(a[i] - b[j]) <= tol::kSeparation) {
        std::ostringstream msg;
        msg << a_name << "[" << i << "]=" << a[i] << " and " << b_name << "["
            << j << "]=" << b[j] << " are not separated";
        throw Error(ErrorCode::kDegenerateDecays, msg.str());
      }
    }
  }
}

// prod_j (x - a_j) / prod_{j != skip} (x - b_j)
double closed_form_scale(double x, std::span<const double> a,
                         std::span<const double> b, std::size_t skip) {
  double value = 1.0;
  for (std::size_t j = 0; j < a.size(); ++j) value *= x - a[j];
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (j != skip) value /= x - b[j];
  }
  return value;
}

std::string describe(const InverseBltParams& inv) {
  std::ostringstream s;
  s << "regime " << to_string(inv.regime) << ", lambda_hat = (";
  for (std::size_t i = 0; i < inv.lambda_hat.size(); ++i) {
    s << (i ? ", " : "") << inv.lambda_hat[i];
  }
  s << "), alpha_hat = (";
  for (std::size_t i = 0; i < inv.alpha_hat.size(); ++i) {
    s << (i ? ", " : "") << inv.alpha_hat[i];
  }
  s << ")";
  return s.str();
}

// Sign and placement guarantees of the inverse; any breach means the
// numerics broke down.
void check_inverse(const BltParams& params, const InverseBltParams& inv) {
  const std::size_t d = params.degree();
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kInversionFailure, what + "; " + describe(inv));
  };
  for (double a : inv.alpha_hat) {
    if (!(a < 0.0)) fail("alpha_hat not negative");
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (!(params.lambda[i] > inv.lambda_hat[i])) fail("decays do not interlace");
    if (i + 1 < d && !(inv.lambda_hat[i] > params.lambda[i + 1])) {
      fail("decays do not interlace");
    }
  }
  for (std::size_t i = 0; i + 1 < d; ++i) {
    if (!(inv.lambda_hat[i] > 0.0)) fail("lambda_hat outside (0,1)");
  }
  const double last = inv.lambda_hat[d - 1];
  switch (inv.regime) {
    case Regime::kLT1:
      if (!(last > 0.0)) fail("LT1 inverse has a non-positive decay");
      break;
    case Regime::kEQ1:
      if (last != 0.0) fail("EQ1 inverse lacks the zero decay");
      break;
    case Regime::kGT1:
      if (!(last < 0.0 && last > -1.0)) fail("GT1 inverse decay not in (-1,0)");
      break;
  }
}

// Inverse of an LT1 BLT: negative scales, decays in (0,1). Its own inverse
// has positive scales and decays interlacing from above.
bool is_inverse_class(const BltParams& params) {
  if (!validate(params, ValidationMode::kLenient)) return false;
  for (std::size_t i = 0; i < params.degree(); ++i) {
    if (!(params.alpha[i] < 0.0)) return false;
    if (!(params.lambda[i] > 0.0 && params.lambda[i] < 1.0)) return false;
  }
  return true;
}

void check_swapped_inverse(const BltParams& params, const InverseBltParams& inv) {
  const std::size_t d = params.degree();
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kInversionFailure, what + "; " + describe(inv));
  };
  for (double a : inv.alpha_hat) {
    if (!(a > 0.0)) fail("inverse of a negative-scale BLT has a non-positive scale");
  }
  if (!(inv.lambda_hat[0] < 1.0)) fail("decay outside (0,1)");
  for (std::size_t i = 0; i < d; ++i) {
    if (!(inv.lambda_hat[i] > params.lambda[i])) fail("decays do not interlace");
    if (i + 1 < d && !(params.lambda[i] > inv.lambda_hat[i + 1])) {
      fail("decays do not interlace");
    }
  }
}

// g(z) = 1 + sum alpha_j / (z - lambda_j); its zeros are the inverse decays.
double secular(const BltParams& params, double z) {
  double g = 1.0;
  for (std::size_t j = 0; j < params.degree(); ++j) g += params.alpha[j] / (z - params.lambda[j]);
  return g;
}

double secular_slope(const BltParams& params, double z) {
  double s = 0.0;
  for (std::size_t j = 0; j < params.degree(); ++j) {
    const double t = z - params.lambda[j];
    s -= params.alpha[j] / (t * t);
  }
  return s;
}

// Re-solves for an inverse decay on the secular function, which is far
// better conditioned than the expanded r once the decays cluster. g is
// monotone between consecutive poles, so a sign change brackets the root.
// Returns z0 unchanged if no bracket is found near it.
double refine_inverse_decay(const BltParams& params, double z0) {
  double left_pole = -INFINITY;
  double right_pole = INFINITY;
  for (double l : params.lambda) {
    if (l < z0) left_pole = std::max(left_pole, l);
    if (l > z0) right_pole = std::min(right_pole, l);
  }
  if (!std::isfinite(z0) || z0 == left_pole || z0 == right_pole) return z0;
  const double g0 = secular(params, z0);
  if (g0 == 0.0) return z0;

  double step = 1e-13 * std::max(1.0, std::abs(z0));
  double lo = z0, hi = z0;
  double g_lo = g0;
  bool bracketed = false;
  for (int k = 0; k < 60 && !bracketed; ++k, step *= 8.0) {
    double a = z0 - step;
    double b = z0 + step;
    if (std::isfinite(left_pole)) a = std::max(a, left_pole + 0.5 * (z0 - left_pole));
    if (std::isfinite(right_pole)) b = std::min(b, right_pole - 0.5 * (right_pole - z0));
    const double ga = secular(params, a);
    const double gb = secular(params, b);
    if (std::signbit(ga) != std::signbit(g0)) {
      lo = a; g_lo = ga; hi = z0;
      bracketed = true;
    } else if (std::signbit(gb) != std::signbit(g0)) {
      lo = z0; g_lo = g0; hi = b;
      bracketed = true;
    }
  }
  if (!bracketed) return z0;

  double z = z0;
  for (int it = 0; it < 200 && hi > std::nextafter(lo, hi); ++it) {
    const double g = secular(params, z);
    if (g == 0.0) return z;
    if (std::signbit(g) == std::signbit(g_lo)) {
      lo = z; g_lo = g;
    } else {
      hi = z;
    }
    const double slope = secular_slope(params, z);
    double next = slope != 0.0 ? z - g / slope : lo + 0.5 * (hi - lo);
    if (!(next > lo && next < hi)) next = lo + 0.5 * (hi - lo);
    if (next == z) break;
    z = next;
  }
  return z;
}

}  // namespace

InverseBltParams invert_params(const BltParams& input) {
  const ValidationReport report = validate(input, ValidationMode::kStrict);
  const bool swapped = !report && is_inverse_class(input);
  if (!report && !swapped) throw Error(ErrorCode::kInvalidParams, report.summary());
  const BltParams params = canonical(input);
  const std::size_t d = params.degree();

  const Polynomial q = build_q(params.lambda);
  const Polynomial p = build_p(params.alpha, params.lambda);
  // r = q + x p with its degree fixed by the regime rather than by the
  // magnitude of the cancelled leading coefficient.
  std::vector<double> rc(d + 1, 0.0);
  const auto qc = q.coeffs();
  const auto pc = p.coeffs();
  for (std::size_t k = 0; k < qc.size(); ++k) rc[k] += qc[k];
  for (std::size_t k = 0; k < pc.size() && k + 1 <= d; ++k) rc[k + 1] += pc[k];
  InverseBltParams inv;
  inv.regime = swapped ? regime_of(params) : *report.regime;
  if (inv.regime == Regime::kEQ1) rc.pop_back();
  const Polynomial r(std::move(rc));
  const std::size_t expected = inv.regime == Regime::kEQ1 ? d - 1 : d;

  RootSet roots;
  try {
    if (expected > 0) roots = roots_companion(r);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInversionFailure, e.what());
  }
  if (roots.roots.size() != expected) {
    throw Error(ErrorCode::kInversionFailure,
                "r has degree " + std::to_string(r.degree()) + ", expected " +
                    std::to_string(expected));
  }
  for (double nu : roots.roots) inv.lambda_hat.push_back(refine_inverse_decay(params, 1.0 / nu));
  std::sort(inv.lambda_hat.begin(), inv.lambda_hat.end(), std::greater<>());
  if (inv.regime == Regime::kEQ1) inv.lambda_hat.push_back(0.0);

  try {
    inv.alpha_hat = scales_from_decays(params.lambda, inv.lambda_hat).alpha_hat;
  } catch (const Error& e) {
    throw Error(ErrorCode::kInversionFailure, e.what());
  }
  if (swapped) {
    check_swapped_inverse(params, inv);
  } else {
    check_inverse(params, inv);
  }
  return inv;
}

ScalePair scales_from_decays(std::span<const double> lambda,
                             std::span<const double> lambda_hat) {
  if (lambda.size() != lambda_hat.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "lambda and lambda_hat differ in length");
  }
  check_separated(lambda, "lambda", lambda, "lambda", true);
  check_separated(lambda_hat, "lambda_hat", lambda_hat, "lambda_hat", true);
  check_separated(lambda, "lambda", lambda_hat, "lambda_hat", false);
  const std::size_t d = lambda.size();
  ScalePair out;
  out.alpha.resize(d);
  out.alpha_hat.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    out.alpha[i] = closed_form_scale(lambda[i], lambda_hat, lambda, i);
    out.alpha_hat[i] = closed_form_scale(lambda_hat[i], lambda, lambda_hat, i);
  }
  return out;
}

std::optional<double> scale_identity_residual(
    std::span<const double> lambda, std::span<const double> lambda_hat,
    std::span<const double> alpha_hat) {
  double sum = 0.0;
  double ratio = 1.0;
  for (std::size_t i = 0; i < lambda_hat.size(); ++i) {
    if (lambda_hat[i] == 0.0) return std::nullopt;
    sum += alpha_hat[i] / lambda_hat[i];
    ratio *= lambda[i] / lambda_hat[i];
  }
  return std::abs(sum + ratio - 1.0);
}

std::pair<BltParams, InverseBltParams> from_interlaced(
    std::span<const double> lambda, std::span<const double> lambda_hat) {
  if (lambda.size() != lambda_hat.size() || lambda.empty()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "lambda and lambda_hat must be non-empty and of equal length");
  }
  const std::size_t d = lambda.size();
  std::vector<double> chain;
  chain.reserve(2 * d + 2);
  chain.push_back(1.0);
  for (std::size_t i = 0; i < d; ++i) {
    chain.push_back(lambda[i]);
    chain.push_back(lambda_hat[i]);
  }
  chain.push_back(0.0);
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
    if (!(chain[k] - chain[k + 1] > tol::kSeparation)) {
      std::ostringstream msg;
      msg << "inequality " << k << " fails: " << chain[k]
          << " is not above " << chain[k + 1];
      throw InterlacingError(k, msg.str());
    }
  }
  ScalePair scales = scales_from_decays(lambda, lambda_hat);
  BltParams params{std::move(scales.alpha),
                   std::vector<double>(lambda.begin(), lambda.end())};
  InverseBltParams inv{std::move(scales.alpha_hat),
                       std::vector<double>(lambda_hat.begin(), lambda_hat.end()),
                       Regime::kLT1};
  return {std::move(params), std::move(inv)};
}

std::vector<double> LegacyUWV::coeffs(std::size_t n) const {
  std::vector<double> c(n, 0.0);
  if (n == 0) return c;
  std::vector<double> channel(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) channel[i] = u[i] * v[i];
  c[0] = std::accumulate(channel.begin(), channel.end(), 0.0) + kappa;
  for (std::size_t t = 1; t < n; ++t) {
    double sum = 0.0;
    for (std::size_t i = 0; i < channel.size(); ++i) {
      channel[i] *= w_diag[i];
      sum += channel[i];
    }
    c[t] = sum;
  }
  return c;
}

LegacyUWV legacy_uwv(const InverseBltParams& inv, const BltParams& params) {
  LegacyUWV out;
  const std::size_t d = inv.degree();
  for (std::size_t i = 0; i < d; ++i) {
    if (std::abs(inv.lambda_hat[i]) <= tol::kSeparation) {
      throw Error(ErrorCode::kZeroDecay,
                  "lambda_hat[" + std::to_string(i) +
                      "] is zero; v = alpha_hat / lambda_hat is undefined");
    }
  }
  out.w_diag = inv.lambda_hat;
  out.u.assign(d, 1.0);
  out.v.resize(d);
  double v_sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    out.v[i] = inv.alpha_hat[i] / inv.lambda_hat[i];
    v_sum += out.v[i];
  }
  // Forced by c_hat_1 = 1.
  out.kappa = 1.0 - v_sum;
  out.kappa_unhatted = 1.0 - ratio_sum(params);
  return out;
}

}  // namespace blt
