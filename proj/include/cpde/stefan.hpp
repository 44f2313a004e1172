#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cpde/initial_density.hpp"
#include "cpde/models.hpp"

namespace cpde {

/// One-phase free-boundary spreading model on 0 < x < h(t):
///   u_t - d u_xx = r(t) u (1 - u/K),  u_x(t, 0) = 0,  u(t, h(t)) = 0,
///   h'(t) = -mu u_x(t, h(t)),         h(0) = h0.
struct StefanModel {
  double d = 1;
  double k = 1;
  DecaySpec decay;
  double mu = 1;   // diffusion ability of the front
  double h0 = 1;
  InitialDensity u0;  // on [0, h0], u0(h0) = 0, u0'(0) = 0, u0 > 0 inside

  StefanModel(double d_, double k_, DecaySpec decay_, double mu_, double h0_, InitialDensity u0_)
      : d(d_), k(k_), decay(std::move(decay_)), mu(mu_), h0(h0_), u0(std::move(u0_)) {
    validate();
  }

  void validate() const;
  /// Same model with initial data scaled to lambda * u0.
  StefanModel scaled_initial(double lambda) const;
};

struct StefanOptions {
  double vanish_sup_tol = 1e-6;  // sup-norm below this means the news vanished
  double spread_horizon = 0;     // front beyond this means spreading; <= 0 picks 5 h0
  bool early_stop = false;       // stop integrating once a regime is decided
};

/// Front trajectory and solution on the front-fixed reference grid xi = x/h(t).
struct FrontTrajectory {
  enum class Regime { vanishing, spreading };

  std::vector<double> times;       // every accepted macro step
  std::vector<double> h_values;    // front position h(t), non-decreasing
  std::vector<double> sup_values;  // sup-norm of u per step
  Eigen::VectorXd xi;              // reference grid on [0, 1]
  std::vector<double> snapshot_times;
  std::vector<double> snapshot_h;
  Eigen::MatrixXd u;  // nx x snapshots, u(xi, t); physical x = xi * h(t)
  Regime regime = Regime::vanishing;
  /// True when a hard condition fired (sup-norm under the tolerance or front
  /// past the horizon). False means the run ended between the two and was
  /// classified by which side of the critical length (pi/2) sqrt(d/r_inf)
  /// the front reached: spreading cannot happen without crossing it.
  bool decisive = false;
};

/// Front-fixing (Landau) solve: the moving domain maps onto [0, 1], the front
/// ODE is advanced with the PDE. grid.l/L must be 0/1 (the reference domain),
/// grid.t0 is the model's time origin (0 unless the decay form needs t >= 1).
FrontTrajectory solve_stefan(const StefanModel& model, const GridSpec& grid,
                             const StefanOptions& options = {});

struct FrontSpeed {
  double k0 = 0;
  double intercept = 0;
  double residual = 0;  // RMS of the linear-fit residuals
  int samples = 0;
};

/// Least-squares slope of h(t) over the trailing fraction of the run.
FrontSpeed front_speed(const std::vector<double>& times, const std::vector<double>& h_values,
                       double tail_fraction);
FrontSpeed front_speed(const FrontTrajectory& traj, double tail_fraction);

struct LambdaBracket {
  double lo = 0;  // largest lambda observed to vanish
  double hi = 0;  // smallest lambda observed to spread
};

/// Bisection bracket for the spreading threshold lambda*: initial data
/// lambda * u0 vanishes below it and spreads above it. The range endpoints
/// must classify differently.
LambdaBracket vanishing_threshold(const StefanModel& base, double lambda_lo, double lambda_hi,
                                  const GridSpec& grid, const StefanOptions& options = {},
                                  int bisections = 20);

}  // namespace cpde
