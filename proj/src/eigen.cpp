#include "blt/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "blt/errors.hpp"
#include "blt/tolerances.hpp"

namespace blt::linalg {

void balance(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  constexpr double kGamma = 0.95;
  bool changed = true;
  while (changed) {
    changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      // Off-diagonal norms only, as in the original Parlett-Reinsch scheme.
      const double col = a.col(i).lpNorm<1>() - std::abs(a(i, i));
      const double row = a.row(i).lpNorm<1>() - std::abs(a(i, i));
      if (col == 0.0 || row == 0.0) continue;
      int exponent = 0;
      std::frexp(row / col, &exponent);
      exponent /= 2;
      if (exponent == 0) continue;
      const double scaled_col = std::ldexp(col, exponent);
      const double scaled_row = std::ldexp(row, -exponent);
      if (scaled_col + scaled_row < kGamma * (col + row)) {
        changed = true;
        a.row(i) *= std::ldexp(1.0, -exponent);
        a.col(i) *= std::ldexp(1.0, exponent);
      }
    }
  }
}

void reduce_to_hessenberg(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index len = n - k - 1;
    Eigen::VectorXd v = a.col(k).tail(len);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    const double alpha = v(0) >= 0.0 ? -norm : norm;
    v(0) -= alpha;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    // A <- H A H with H = I - 2 v v^T acting on rows/cols k+1..n-1.
    auto rows = a.bottomRows(len);
    rows -= 2.0 * v * (v.transpose() * rows);
    auto cols = a.rightCols(len);
    cols -= 2.0 * (cols * v) * v.transpose();
    a.col(k).tail(len - 1).setZero();
    a(k + 1, k) = alpha;
  }
}

namespace {

double sign_of(double magnitude, double reference) {
  return reference >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

}  // namespace

// Francis double-shift QR on an upper Hessenberg matrix, deflating from the
// bottom. Structure follows the classic EISPACK hqr routine.
std::vector<std::complex<double>> hessenberg_eigenvalues(Eigen::MatrixXd a,
                                                         int max_iterations) {
  const int n = static_cast<int>(a.rows());
  std::vector<std::complex<double>> values(n);
  if (n == 0) return values;
  const double eps = std::numeric_limits<double>::epsilon();

  double anorm = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
  }

  int nn = n - 1;
  int total_iterations = 0;
  double shift = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l = 0;
    do {
      // Look for a negligible subdiagonal element.
      for (l = nn; l > 0; --l) {
        double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) <= eps * s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a(nn, nn);
      if (l == nn) {
        values[nn--] = x + shift;
      } else {
        double y = a(nn - 1, nn - 1);
        double w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          const double p = 0.5 * (y - x);
          const double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += shift;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            values[nn - 1] = values[nn] = x + z;
            if (z != 0.0) values[nn] = x - w / z;
          } else {
            values[nn] = {x + p, -z};
            values[nn - 1] = {x + p, z};
          }
          nn -= 2;
        } else {
          if (total_iterations >= max_iterations) {
            throw Error(ErrorCode::kNoConvergence,
                        "shifted QR exceeded " +
                            std::to_string(max_iterations) + " iterations");
          }
          if (its == 10 || its == 20) {
            // Exceptional shift.
            shift += x;
            for (int i = 0; i <= nn; ++i) a(i, i) -= x;
            const double s =
                std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          ++total_iterations;
          int m = nn - 2;
          double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
          for (; m >= l; --m) {
            z = a(m, m);
            r = x - z;
            double s = y - z;
            p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - r - s;
            r = a(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v =
                std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) +
                               std::abs(a(m + 1, m + 1)));
            if (u <= eps * v) break;
          }
          for (int i = m; i < nn - 1; ++i) {
            a(i + 2, i) = 0.0;
            if (i != m) a(i + 2, i - 1) = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = 0.0;
              if (k + 1 != nn) r = a(k + 2, k - 1);
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) a(k, k - 1) = -a(k, k - 1);
            } else {
              a(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j) {
              p = a(k, j) + q * a(k + 1, j);
              if (k + 1 != nn) {
                p += r * a(k + 2, j);
                a(k + 2, j) -= p * z;
              }
              a(k + 1, j) -= p * y;
              a(k, j) -= p * x;
            }
            const int mmin = nn < k + 3 ? nn : k + 3;
            for (int i = l; i <= mmin; ++i) {
              p = x * a(i, k) + y * a(i, k + 1);
              if (k + 1 != nn) {
                p += z * a(i, k + 2);
                a(i, k + 2) -= p * r;
              }
              a(i, k + 1) -= p * q;
              a(i, k) -= p;
            }
          }
        }
      }
    } while (l + 1 < nn);
  }
  return values;
}

std::vector<std::complex<double>> eigenvalues(Eigen::MatrixXd a) {
  balance(a);
  reduce_to_hessenberg(a);
  const int cap =
      tol::kQrIterationsPerRoot * std::max<int>(1, static_cast<int>(a.rows()));
  return hessenberg_eigenvalues(std::move(a), cap);
}

}  // namespace blt::linalg
