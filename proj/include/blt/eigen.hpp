#ifndef BLT_EIGEN_HPP_
#define BLT_EIGEN_HPP_

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace blt::linalg {

// Parlett-Reinsch balancing by powers of two. Similarity transform, so the
// spectrum is unchanged; upper Hessenberg structure is preserved.
void balance(Eigen::MatrixXd& a);

// Householder reduction to upper Hessenberg form (in place).
void reduce_to_hessenberg(Eigen::MatrixXd& a);

// Eigenvalues of an upper Hessenberg matrix by Francis double-shift QR.
// Throws NoConvergence after max_iterations QR sweeps in total.
std::vector<std::complex<double>> hessenberg_eigenvalues(Eigen::MatrixXd h,
                                                         int max_iterations);

// balance + reduce_to_hessenberg + hessenberg_eigenvalues, with an iteration
// cap of tol::kQrIterationsPerRoot per eigenvalue.
std::vector<std::complex<double>> eigenvalues(Eigen::MatrixXd a);

}  // namespace blt::linalg

#endif  // BLT_EIGEN_HPP_
