#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cpde/spline.hpp"

namespace cpde {

/// Initial density profile phi(x) interpolating observed (distance, density)
/// samples with flat ends: phi'(l) = phi'(L) = 0. Interpolation is a clamped
/// C2 cubic spline; below 4 samples a shape-preserving cubic is used instead.
/// Evaluation clamps negative spline undershoot to zero so phi >= 0 holds
/// everywhere, not just at the knots.
class InitialDensity {
 public:
  InitialDensity(CubicSpline<double> spline, bool shape_preserving)
      : spline_(std::move(spline)), shape_preserving_(shape_preserving) {}

  double domain_lo() const { return spline_.domain_lo(); }
  double domain_hi() const { return spline_.domain_hi(); }
  bool shape_preserving() const { return shape_preserving_; }
  const CubicSpline<double>& spline() const { return spline_; }

  double operator()(double x) const {
    const double v = spline_(x);
    return v < 0 ? 0.0 : v;
  }

  Eigen::VectorXd values_at(const Eigen::VectorXd& xs) const {
    Eigen::VectorXd v(xs.size());
    for (Eigen::Index i = 0; i < xs.size(); ++i) v[i] = (*this)(xs[i]);
    return v;
  }

  /// The profile scaled by a positive factor (interpolation is linear in the
  /// data, so scaling knot values and slopes scales the whole curve).
  InitialDensity scaled(double factor) const {
    if (factor <= 0) throw validation_error("scale factor must be > 0");
    return InitialDensity(CubicSpline<double>(spline_.knots_x(), factor * spline_.knots_y(),
                                              factor * spline_.knot_slopes()),
                          shape_preserving_);
  }

 private:
  CubicSpline<double> spline_;
  bool shape_preserving_;
};

/// Builds phi from samples (x, value). Requires >= 2 samples with strictly
/// increasing x, non-negative values, not all zero.
InitialDensity build_initial_density(const std::vector<std::pair<double, double>>& samples);

}  // namespace cpde
