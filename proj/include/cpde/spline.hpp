#pragma once

#include <Eigen/Dense>

#include "cpde/errors.hpp"
#include "cpde/tridiag.hpp"

namespace cpde {

/// Piecewise cubic Hermite interpolant: knot values plus knot slopes.
/// Factory functions below choose the slopes (C2 clamped spline or
/// shape-preserving slopes), evaluation is shared.
template <typename Scalar>
class CubicSpline {
 public:
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  CubicSpline(Vec x, Vec y, Vec slope) : x_(std::move(x)), y_(std::move(y)), m_(std::move(slope)) {}

  Scalar domain_lo() const { return x_[0]; }
  Scalar domain_hi() const { return x_[x_.size() - 1]; }
  const Vec& knots_x() const { return x_; }
  const Vec& knots_y() const { return y_; }
  const Vec& knot_slopes() const { return m_; }

  Scalar operator()(Scalar x) const {
    const Eigen::Index i = interval(x);
    const Scalar h = x_[i + 1] - x_[i];
    const Scalar t = (x - x_[i]) / h;
    const Scalar t2 = t * t, t3 = t2 * t;
    return y_[i] * (2 * t3 - 3 * t2 + 1) + h * m_[i] * (t3 - 2 * t2 + t) +
           y_[i + 1] * (-2 * t3 + 3 * t2) + h * m_[i + 1] * (t3 - t2);
  }

  Scalar derivative(Scalar x) const {
    const Eigen::Index i = interval(x);
    const Scalar h = x_[i + 1] - x_[i];
    const Scalar t = (x - x_[i]) / h;
    const Scalar t2 = t * t;
    return (y_[i] * (6 * t2 - 6 * t) + h * m_[i] * (3 * t2 - 4 * t + 1) +
            y_[i + 1] * (-6 * t2 + 6 * t) + h * m_[i + 1] * (3 * t2 - 2 * t)) /
           h;
  }

  Scalar second_derivative(Scalar x) const {
    const Eigen::Index i = interval(x);
    const Scalar h = x_[i + 1] - x_[i];
    const Scalar t = (x - x_[i]) / h;
    return (y_[i] * (12 * t - 6) + h * m_[i] * (6 * t - 4) + y_[i + 1] * (-12 * t + 6) +
            h * m_[i + 1] * (6 * t - 2)) /
           (h * h);
  }

 private:
  Eigen::Index interval(Scalar x) const {
    if (x < x_[0] || x > x_[x_.size() - 1]) throw domain_error("spline evaluated outside its knot range");
    Eigen::Index lo = 0, hi = x_.size() - 1;
    while (hi - lo > 1) {
      const Eigen::Index mid = (lo + hi) / 2;
      (x_[mid] <= x ? lo : hi) = mid;
    }
    return lo;
  }

  Vec x_, y_, m_;
};

namespace detail {

template <typename Scalar>
void check_knots(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x) {
  if (x.size() < 2) throw validation_error("spline needs at least 2 knots");
  for (Eigen::Index i = 1; i < x.size(); ++i) {
    if (x[i] == x[i - 1]) throw validation_error("duplicate spline knot abscissa");
    if (x[i] < x[i - 1]) throw validation_error("spline knots must be strictly increasing");
  }
}

}  // namespace detail

/// C2 cubic spline with prescribed end slopes. The slopes are recovered from
/// the standard clamped-spline tridiagonal system written in first-derivative
/// form, so interior second derivatives match across knots.
template <typename Scalar>
CubicSpline<Scalar> clamped_spline(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x,
                                   const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y,
                                   Scalar slope_lo = 0, Scalar slope_hi = 0) {
  detail::check_knots(x);
  const Eigen::Index n = x.size();
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vec m(n);
  if (n == 2) {
    m << slope_lo, slope_hi;
    return CubicSpline<Scalar>(x, y, m);
  }
  Tridiag<Scalar> sys(n);
  Vec rhs(n);
  sys.diag[0] = 1;
  rhs[0] = slope_lo;
  sys.diag[n - 1] = 1;
  rhs[n - 1] = slope_hi;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const Scalar hl = x[i] - x[i - 1];
    const Scalar hr = x[i + 1] - x[i];
    sys.lower[i] = 1 / hl;
    sys.diag[i] = 2 * (1 / hl + 1 / hr);
    sys.upper[i] = 1 / hr;
    rhs[i] = 3 * ((y[i] - y[i - 1]) / (hl * hl) + (y[i + 1] - y[i]) / (hr * hr));
  }
  m = solve_tridiag(sys, rhs);
  return CubicSpline<Scalar>(x, y, m);
}

/// Shape-preserving (Fritsch-Carlson) interpolant with prescribed end slopes.
/// Only C1, but free of the oscillation a clamped spline shows on 2-3 points.
template <typename Scalar>
CubicSpline<Scalar> monotone_spline(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x,
                                    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y,
                                    Scalar slope_lo = 0, Scalar slope_hi = 0) {
  detail::check_knots(x);
  const Eigen::Index n = x.size();
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vec m = Vec::Zero(n);
  m[0] = slope_lo;
  m[n - 1] = slope_hi;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const Scalar hl = x[i] - x[i - 1];
    const Scalar hr = x[i + 1] - x[i];
    const Scalar dl = (y[i] - y[i - 1]) / hl;
    const Scalar dr = (y[i + 1] - y[i]) / hr;
    if (dl * dr <= 0) {
      m[i] = 0;
    } else {
      const Scalar w1 = 2 * hr + hl;
      const Scalar w2 = hr + 2 * hl;
      m[i] = 3 * (hl + hr) / (w1 / dl + w2 / dr);
    }
  }
  return CubicSpline<Scalar>(x, y, m);
}

}  // namespace cpde
