#ifndef BLT_LOSS_HPP_
#define BLT_LOSS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "blt/blt.hpp"

namespace blt {

// The workload A of the factorization A = B C.
class WorkloadSpec {
 public:
  enum class Kind { kPrefixSum, kExplicit };

  // All-ones lower-triangular n x n matrix.
  static WorkloadSpec prefix_sum(std::size_t n);
  // Throws SingularWorkload unless `a` is square, lower-triangular and has a
  // nonzero diagonal.
  static WorkloadSpec explicit_lower(Eigen::MatrixXd a);

  Kind kind() const { return kind_; }
  std::size_t n() const { return n_; }
  // Dense A (materialized for kPrefixSum).
  Eigen::MatrixXd dense() const;
  double at(std::size_t row, std::size_t col) const;

 private:
  WorkloadSpec(Kind kind, std::size_t n, Eigen::MatrixXd a)
      : kind_(kind), n_(n), a_(std::move(a)) {}

  Kind kind_;
  std::size_t n_;
  Eigen::MatrixXd a_;
};

struct LossReport {
  double sensitivity = 0.0;
  double max_row_norm = 0.0;
  double loss = 0.0;            // sensitivity * max_row_norm
  double frobenius_loss = 0.0;  // sensitivity * rms of row norms
  std::size_t worst_row = 0;    // 0-based, lowest index on ties
  std::vector<double> per_row_norms;
};

// Largest column norm of BLT_n(params).
double sensitivity(const BltParams& params, std::size_t n);

// First column of BLT_n(params)^-1, by a streaming solve against e_1.
std::vector<double> inverse_column(const BltParams& params, std::size_t n);

// Row t (0-based) of B = A C^-1 truncated to its first t+1 entries.
std::vector<double> factor_row(const BltParams& params,
                               const WorkloadSpec& workload, std::size_t t);

// Norms of all rows of B = A C^-1. O(n d) for prefix sums, O(n^2 d) for
// explicit workloads.
std::vector<double> factor_row_norms(const BltParams& params,
                                     const WorkloadSpec& workload);

LossReport max_loss(const BltParams& params, const WorkloadSpec& workload);
double frobenius_loss(const BltParams& params, const WorkloadSpec& workload);

struct Objective {
  enum class Kind { kMax, kFrobenius, kSoftMax };
  Kind kind = Kind::kMax;
  double temperature = 1.0;  // kSoftMax only

  static Objective max() { return {Kind::kMax, 1.0}; }
  static Objective frobenius() { return {Kind::kFrobenius, 1.0}; }
  static Objective soft_max(double temperature) {
    return {Kind::kSoftMax, temperature};
  }
};

// sensitivity times max / rms / temperature * logsumexp(norms / temperature)
// of the row norms of B.
double objective_value(const BltParams& params, const WorkloadSpec& workload,
                       const Objective& objective);

// Applies the objective's row aggregation to precomputed row norms.
double aggregate_row_norms(std::span<const double> norms,
                           const Objective& objective);

}  // namespace blt

#endif  // BLT_LOSS_HPP_
