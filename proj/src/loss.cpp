#include "blt/loss.hpp"

#include <algorithm>
#include <cmath>

#include "blt/errors.hpp"
#include "blt/stream.hpp"

namespace blt {

WorkloadSpec WorkloadSpec::prefix_sum(std::size_t n) {
  return WorkloadSpec(Kind::kPrefixSum, n, Eigen::MatrixXd());
}

WorkloadSpec WorkloadSpec::explicit_lower(Eigen::MatrixXd a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::kSingularWorkload, "workload is not square");
  }
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (a(i, i) == 0.0) {
      throw Error(ErrorCode::kSingularWorkload,
                  "zero diagonal entry at row " + std::to_string(i));
    }
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      if (a(i, j) != 0.0) {
        throw Error(ErrorCode::kSingularWorkload,
                    "workload is not lower-triangular");
      }
    }
  }
  const auto n = static_cast<std::size_t>(a.rows());
  return WorkloadSpec(Kind::kExplicit, n, std::move(a));
}

Eigen::MatrixXd WorkloadSpec::dense() const {
  if (kind_ == Kind::kExplicit) return a_;
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a.row(i).head(i + 1).setOnes();
  return a;
}

double WorkloadSpec::at(std::size_t row, std::size_t col) const {
  if (col > row) return 0.0;
  if (kind_ == Kind::kPrefixSum) return 1.0;
  return a_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

namespace {

void require_lenient(const BltParams& params) {
  const ValidationReport report = validate(params, ValidationMode::kLenient);
  if (!report) throw Error(ErrorCode::kInvalidParams, report.summary());
}

}  // namespace

double sensitivity(const BltParams& params, std::size_t n) {
  require_lenient(params);
  const auto c = toeplitz_coeffs(params, n);
  // Column k holds c_1..c_{n-k+1}; its squared norm is a prefix sum of c^2.
  double prefix = 0.0;
  double best = 0.0;
  for (double v : c) {
    prefix += v * v;
    best = std::max(best, prefix);
  }
  return std::sqrt(best);
}

std::vector<double> inverse_column(const BltParams& params, std::size_t n) {
  require_lenient(params);
  StreamState state(params, 1);
  std::vector<double> out(n);
  double impulse = 1.0;
  for (std::size_t t = 0; t < n; ++t) {
    state.step_solve(std::span<const double>(&impulse, 1),
                     std::span<double>(&out[t], 1));
    impulse = 0.0;
  }
  return out;
}

std::vector<double> factor_row(const BltParams& params,
                               const WorkloadSpec& workload, std::size_t t) {
  // b C = a with C upper-triangular Toeplitz in transposed form:
  // b_k = a_k - sum_i alpha_i R_i(k),  R_i(k-1) = lambda_i R_i(k) + b_k.
  const std::size_t d = params.degree();
  std::vector<double> b(t + 1, 0.0);
  std::vector<double> reverse(d, 0.0);
  for (std::size_t k = t + 1; k-- > 0;) {
    double value = workload.at(t, k);
    for (std::size_t i = 0; i < d; ++i) value -= params.alpha[i] * reverse[i];
    b[k] = value;
    for (std::size_t i = 0; i < d; ++i) {
      reverse[i] = params.lambda[i] * reverse[i] + value;
    }
  }
  return b;
}

std::vector<double> factor_row_norms(const BltParams& params,
                                     const WorkloadSpec& workload) {
  require_lenient(params);
  const std::size_t n = workload.n();
  std::vector<double> norms(n);
  if (workload.kind() == WorkloadSpec::Kind::kPrefixSum) {
    // B[t, k] = P_{t-k+1} with P the prefix sums of the inverse column.
    const auto c_hat = inverse_column(params, n);
    double prefix = 0.0;
    double squares = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      prefix += c_hat[t];
      squares += prefix * prefix;
      norms[t] = std::sqrt(squares);
    }
    return norms;
  }
  for (std::size_t t = 0; t < n; ++t) {
    const auto row = factor_row(params, workload, t);
    double squares = 0.0;
    for (double v : row) squares += v * v;
    norms[t] = std::sqrt(squares);
  }
  return norms;
}

LossReport max_loss(const BltParams& params, const WorkloadSpec& workload) {
  LossReport report;
  const std::size_t n = workload.n();
  report.sensitivity = sensitivity(params, n);
  report.per_row_norms = factor_row_norms(params, workload);
  double squares = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double v = report.per_row_norms[t];
    if (v > report.max_row_norm) {
      report.max_row_norm = v;
      report.worst_row = t;
    }
    squares += v * v;
  }
  report.loss = report.sensitivity * report.max_row_norm;
  report.frobenius_loss =
      n ? report.sensitivity * std::sqrt(squares / static_cast<double>(n)) : 0.0;
  return report;
}

double frobenius_loss(const BltParams& params, const WorkloadSpec& workload) {
  return max_loss(params, workload).frobenius_loss;
}

double aggregate_row_norms(std::span<const double> norms,
                           const Objective& objective) {
  if (norms.empty()) return 0.0;
  switch (objective.kind) {
    case Objective::Kind::kMax:
      return *std::max_element(norms.begin(), norms.end());
    case Objective::Kind::kFrobenius: {
      double squares = 0.0;
      for (double v : norms) squares += v * v;
      return std::sqrt(squares / static_cast<double>(norms.size()));
    }
    case Objective::Kind::kSoftMax: {
      const double temp = objective.temperature;
      const double top = *std::max_element(norms.begin(), norms.end());
      double sum = 0.0;
      for (double v : norms) sum += std::exp((v - top) / temp);
      return top + temp * std::log(sum);
    }
  }
  return 0.0;
}

double objective_value(const BltParams& params, const WorkloadSpec& workload,
                       const Objective& objective) {
  if (objective.kind == Objective::Kind::kSoftMax && !(objective.temperature > 0.0)) {
    throw Error(ErrorCode::kInvalidParams, "soft-max temperature must be positive");
  }
  const double sens = sensitivity(params, workload.n());
  return sens * aggregate_row_norms(factor_row_norms(params, workload), objective);
}

}  // namespace blt
