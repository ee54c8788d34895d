#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gpt_spectra/error.hpp"
#include "gpt_spectra/tolerance.hpp"

namespace gpt {

struct SymmetricEigen {
  Eigen::VectorXd values;   // non-increasing
  Eigen::MatrixXd vectors;  // column i belongs to values[i]
};

namespace detail {

inline double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace detail

/// Cyclic Jacobi eigensolver for real symmetric matrices.
///
/// Kept free of any library eigen-routine so that it can serve as an
/// independent check on the operational diagonalization. Eigenvectors are
/// normalized so that their largest-magnitude component (first one on ties)
/// is positive.
inline SymmetricEigen eigensolve_symmetric(const Eigen::MatrixXd& m, int max_sweeps = 100) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NotSquare, "eigensolve_symmetric needs a square matrix");
  const Eigen::Index n = m.rows();
  const double sym_tol = tolerances().symmetry;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > sym_tol)
        throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric within tolerance");

  Eigen::MatrixXd a = 0.5 * (m + m.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  const double target = 1e-12;
  bool converged = detail::off_diagonal_norm(a) < target;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    converged = detail::off_diagonal_norm(a) < target;
  }
  if (!converged) throw Error(ErrorCode::NoConvergence, "Jacobi sweeps exhausted");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x) > a(y, y); });

  SymmetricEigen out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  for (Eigen::Index c = 0; c < n; ++c) {
    const Eigen::Index src = order[static_cast<std::size_t>(c)];
    out.values(c) = a(src, src);
    Eigen::VectorXd col = v.col(src);
    Eigen::Index big = 0;
    for (Eigen::Index k = 1; k < n; ++k)
      if (std::abs(col(k)) > std::abs(col(big)) + 1e-14) big = k;
    if (col(big) < 0) col = -col;
    out.vectors.col(c) = col;
  }
  return out;
}

}  // namespace gpt
