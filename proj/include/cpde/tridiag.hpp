#pragma once

#include <Eigen/Dense>

#include "cpde/errors.hpp"

namespace cpde {

/// Tridiagonal system in three diagonals. lower[0] and upper[n-1] are unused.
template <typename Scalar>
struct Tridiag {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vec lower, diag, upper;

  explicit Tridiag(Eigen::Index n) : lower(Vec::Zero(n)), diag(Vec::Zero(n)), upper(Vec::Zero(n)) {}

  Eigen::Index size() const { return diag.size(); }

  /// y = M x
  Vec apply(const Vec& x) const {
    const Eigen::Index n = size();
    Vec y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      Scalar s = diag[i] * x[i];
      if (i > 0) s += lower[i] * x[i - 1];
      if (i + 1 < n) s += upper[i] * x[i + 1];
      y[i] = s;
    }
    return y;
  }
};

/// Thomas algorithm. The systems assembled here are diagonally dominant,
/// so no pivoting is needed.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> solve_tridiag(
    const Tridiag<Scalar>& m, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& rhs) {
  const Eigen::Index n = m.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c(n), x(n);
  Scalar piv = m.diag[0];
  if (piv == Scalar(0)) throw numeric_error("tridiagonal solve: zero pivot at row 0");
  c[0] = m.upper[0] / piv;
  x[0] = rhs[0] / piv;
  for (Eigen::Index i = 1; i < n; ++i) {
    piv = m.diag[i] - m.lower[i] * c[i - 1];
    if (piv == Scalar(0)) throw numeric_error("tridiagonal solve: zero pivot");
    c[i] = m.upper[i] / piv;
    x[i] = (rhs[i] - m.lower[i] * x[i - 1]) / piv;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) x[i] -= c[i] * x[i + 1];
  return x;
}

}  // namespace cpde
