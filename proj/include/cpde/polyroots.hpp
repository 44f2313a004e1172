#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cpde/errors.hpp"

namespace cpde {

/// Monic characteristic polynomial of a small square matrix by the
/// Faddeev-LeVerrier recurrence. Returns coefficients c so that
/// p(z) = z^n + c[n-1] z^{n-1} + ... + c[0].
template <typename Scalar>
std::vector<Scalar> characteristic_polynomial(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols() || n < 1 || n > 4)
    throw validation_error("characteristic polynomial supports square matrices of size 1..4");
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat mk = Mat::Zero(n, n);
  std::vector<Scalar> c(static_cast<size_t>(n) + 1, Scalar(0));
  c[static_cast<size_t>(n)] = Scalar(1);
  Scalar ck = Scalar(1);
  for (Eigen::Index k = 1; k <= n; ++k) {
    mk = m * (mk + ck * Mat::Identity(n, n));
    ck = -mk.trace() / static_cast<Scalar>(k);
    c[static_cast<size_t>(n - k)] = ck;
  }
  return c;
}

/// All complex roots of a monic polynomial via Durand-Kerner iteration.
/// Deterministic: fixed starting configuration, fixed iteration cap.
template <typename Scalar>
std::vector<std::complex<Scalar>> polynomial_roots(const std::vector<Scalar>& monic_coeffs) {
  const size_t deg = monic_coeffs.size() - 1;
  using C = std::complex<Scalar>;
  if (deg == 0) return {};
  if (deg == 1) return {-monic_coeffs[0]};

  Scalar bound = Scalar(1);
  for (size_t i = 0; i < deg; ++i) bound = std::max(bound, std::abs(monic_coeffs[i]));
  bound += Scalar(1);  // Cauchy bound on root magnitude

  auto eval = [&](C z) {
    C p(1, 0);
    for (size_t i = deg; i-- > 0;) p = p * z + monic_coeffs[i];
    return p;
  };

  std::vector<C> z(deg);
  const C seed(Scalar(0.4), Scalar(0.9));
  C w = seed;
  for (size_t k = 0; k < deg; ++k, w *= seed) z[k] = bound * w;

  for (int iter = 0; iter < 500; ++iter) {
    Scalar shift = Scalar(0);
    for (size_t k = 0; k < deg; ++k) {
      C denom(1, 0);
      for (size_t j = 0; j < deg; ++j)
        if (j != k) denom *= z[k] - z[j];
      if (denom == C(0, 0)) denom = C(std::numeric_limits<Scalar>::epsilon(), 0);
      const C delta = eval(z[k]) / denom;
      z[k] -= delta;
      shift = std::max(shift, std::abs(delta));
    }
    if (shift < Scalar(1e-15) * bound) break;
  }
  return z;
}

/// Eigenvalues of a real square matrix, size 1..4. Closed form up to 2x2,
/// characteristic polynomial plus simultaneous root refinement above.
inline std::vector<std::complex<double>> small_matrix_eigenvalues(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols() || n < 1 || n > 4)
    throw validation_error("eigenvalues supported for square matrices of size 1..4");
  if (n == 1) return {std::complex<double>(m(0, 0), 0)};
  if (n == 2) {
    const double tr = m(0, 0) + m(1, 1);
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double disc = tr * tr / 4 - det;
    if (disc >= 0) {
      const double s = std::sqrt(disc);
      return {std::complex<double>(tr / 2 - s, 0), std::complex<double>(tr / 2 + s, 0)};
    }
    const double s = std::sqrt(-disc);
    return {std::complex<double>(tr / 2, -s), std::complex<double>(tr / 2, s)};
  }
  return polynomial_roots(characteristic_polynomial(m));
}

}  // namespace cpde
