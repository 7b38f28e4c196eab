#ifndef BLT_DIFF_HPP_
#define BLT_DIFF_HPP_

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "blt/blt.hpp"
#include "blt/loss.hpp"

namespace blt {

enum class JacobianMethod { kImplicit, kFiniteDifference };

// d(alpha_hat, lambda_hat) / d(alpha, lambda), shape 2d x 2d.
// Rows follow the canonical (descending lambda_hat) order of invert_params;
// columns follow the input parameters in the order they were given.
struct InversionJacobian {
  Eigen::MatrixXd matrix;
  JacobianMethod method = JacobianMethod::kImplicit;
};

// Differentiates the root conditions r(nu_i; alpha, lambda) = 0 and the
// closed-form inverse scales. Requires strict-valid params outside EQ1.
InversionJacobian jacobian_implicit(const BltParams& params);

// Central differences of invert_params with step h * (1 + |theta_k|) per
// coordinate (h defaults to 1e-6).
InversionJacobian jacobian_fd(const BltParams& params,
                              std::optional<double> h = std::nullopt);

struct LossGradient {
  double value = 0.0;
  std::vector<double> gradient;  // (d/dalpha, d/dlambda), input order
};

// Gradient of objective_value. The max aggregation is differentiated at the
// worst row (lowest index on ties).
LossGradient loss_gradient(const BltParams& params, const WorkloadSpec& workload,
                           const Objective& objective = Objective::max());

// Central-difference oracle for loss_gradient.
LossGradient loss_gradient_fd(const BltParams& params,
                              const WorkloadSpec& workload,
                              const Objective& objective = Objective::max(),
                              double h = 1e-6);

}  // namespace blt

#endif  // BLT_DIFF_HPP_
