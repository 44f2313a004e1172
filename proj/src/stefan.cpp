#include "cpde/stefan.hpp"

#include <algorithm>
#include <cmath>

#include "cpde/errors.hpp"
#include "cpde/format.hpp"
#include "cpde/tridiag.hpp"

namespace cpde {

void StefanModel::validate() const {
  if (d <= 0 || k <= 0 || mu <= 0 || h0 <= 0)
    throw validation_error("stefan model needs d, K, mu, h0 > 0");
  if (!(decay.limit() > 0)) throw validation_error("stefan model needs r(t) -> r_inf > 0");
  if (std::abs(u0.domain_lo()) > 1e-9 || std::abs(u0.domain_hi() - h0) > 1e-9)
    throw validation_error("initial data must live on [0, h0]");
  const auto& ys = u0.spline().knots_y();
  if (ys[ys.size() - 1] != 0) throw validation_error("initial data must vanish at the front x = h0");
  for (Eigen::Index i = 0; i + 1 < ys.size(); ++i)
    if (ys[i] <= 0) throw validation_error("initial data must be positive inside [0, h0)");
}

StefanModel StefanModel::scaled_initial(double lambda) const {
  StefanModel m = *this;
  m.u0 = u0.scaled(lambda);
  return m;
}

namespace {

struct StefanStepper {
  const StefanModel& model;
  Eigen::Index n;
  double dxi;
  Eigen::VectorXd xi;

  StefanStepper(const StefanModel& m, Eigen::Index n_) : model(m), n(n_) {
    dxi = 1.0 / static_cast<double>(n - 1);
    xi = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
  }

  /// Rescaled gradient u_x(t, h) = v_xi(1) / h by one-sided second order.
  double boundary_gradient(const Eigen::VectorXd& v, double h) const {
    return (-4.0 * v[n - 2] + v[n - 3]) / (2.0 * dxi) / h;
  }

  /// One step of length ht: front ODE forward Euler, diffusion backward Euler
  /// on the reference grid, advection and reaction explicit. Backward Euler
  /// (not trapezoidal) because the front ODE reads a one-sided boundary
  /// gradient, and trapezoidal stiff-mode oscillation leaks straight into h'.
  void step(double t, double ht, Eigen::VectorXd& v, double& h) const {
    const double ux = boundary_gradient(v, h);
    double hprime = -model.mu * ux;
    // noise floor: discretization wiggle near the pinned end scales with the
    // solution amplitude, so the retreat check must too
    const double retreat_tol = 0.1 * model.mu * v.maxCoeff() / h + 1e-14 * (1.0 + model.mu);
    if (hprime < -retreat_tol)
      throw numeric_error("front retreated (h' = " + format_double(hprime) + " at t = " +
                          format_double(t) + "); the scheme lost consistency");
    hprime = std::max(hprime, 0.0);
    const double h_new = h + ht * hprime;
    const double h_mid = 0.5 * (h + h_new);
    const double diff = model.d / (h_mid * h_mid);
    const double r = decay_rate(model.decay, t);

    Eigen::VectorXd rhs(n);
    const double cfl = ht * diff / (dxi * dxi);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double vi = v[i];
      double adv = 0.0;
      if (i > 0 && i + 1 < n)
        adv = xi[i] * hprime / h_mid * (v[i + 1] - v[i - 1]) / (2.0 * dxi);
      const double react = r * vi * (1.0 - vi / model.k);
      rhs[i] = vi + ht * (adv + react);
    }
    rhs[n - 1] = 0.0;

    Tridiag<double> lhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == 0) {
        lhs.diag[0] = 1.0 + 2.0 * cfl;
        lhs.upper[0] = -2.0 * cfl;
      } else if (i == n - 1) {
        lhs.diag[n - 1] = 1.0;  // pinned: u(t, h(t)) = 0
      } else {
        lhs.lower[i] = -cfl;
        lhs.diag[i] = 1.0 + 2.0 * cfl;
        lhs.upper[i] = -cfl;
      }
    }
    v = solve_tridiag(lhs, rhs);
    v[n - 1] = 0.0;
    h = h_new;
  }

  /// Stable sub-step bound for the explicit advection and front ODE.
  double stable_dt(const Eigen::VectorXd& v, double h, double t) const {
    const double hprime = std::max(0.0, -model.mu * boundary_gradient(v, h));
    double dt = std::numeric_limits<double>::infinity();
    if (hprime > 0) {
      dt = std::min(dt, model.d / (hprime * hprime));      // explicit advection vs CN diffusion
      dt = std::min(dt, 0.05 * h / hprime);                // bounded front motion per step
      dt = std::min(dt, 0.5 * dxi * h / hprime);           // advection CFL
    }
    const double r = decay_rate(model.decay, t);
    if (r > 0) dt = std::min(dt, 0.25 / r);
    return dt;
  }
};

}  // namespace

FrontTrajectory solve_stefan(const StefanModel& model, const GridSpec& grid,
                             const StefanOptions& options) {
  model.validate();
  grid.validate();
  if (std::abs(grid.l) > 1e-12 || std::abs(grid.L - 1.0) > 1e-12)
    throw validation_error("stefan solves on the reference interval [0, 1]");
  if (model.decay.form == DecaySpec::Form::ode_decay && grid.t0 < 1)
    throw validation_error("ode decay requires t0 >= 1");

  const double horizon = options.spread_horizon > 0 ? options.spread_horizon : 5.0 * model.h0;
  StefanStepper stepper(model, grid.nx);

  FrontTrajectory traj;
  traj.xi = stepper.xi;
  Eigen::VectorXd v(grid.nx);
  for (Eigen::Index i = 0; i < grid.nx; ++i) v[i] = model.u0(stepper.xi[i] * model.h0);
  v[grid.nx - 1] = 0.0;
  double h = model.h0;

  const double span = grid.t_end - grid.t0;
  const long total_steps = std::max(1L, static_cast<long>(std::ceil(span / grid.dt - 1e-12)));
  const long per_snap =
      std::max(1L, static_cast<long>(std::ceil(static_cast<double>(total_steps) /
                                               static_cast<double>(grid.max_snapshots - 1))));
  auto time_at = [&](long j) {
    return j >= total_steps ? grid.t_end : grid.t0 + static_cast<double>(j) * grid.dt;
  };

  std::vector<Eigen::VectorXd> snaps;
  auto record_step = [&](long j) {
    traj.times.push_back(time_at(j));
    traj.h_values.push_back(h);
    traj.sup_values.push_back(v.maxCoeff());
  };
  auto record_snapshot = [&](long j) {
    traj.snapshot_times.push_back(time_at(j));
    traj.snapshot_h.push_back(h);
    snaps.push_back(v);
  };
  record_step(0);
  record_snapshot(0);

  const double cap = 1e8 * std::max({1.0, model.k, v.maxCoeff()});
  long last = 0;
  for (long j = 0; j < total_steps; ++j) {
    const double t_a = time_at(j), t_b = time_at(j + 1);
    // split the macro step to respect the explicit stability bounds, then
    // halve further if the step still misbehaves
    long parts = static_cast<long>(std::ceil((t_b - t_a) / stepper.stable_dt(v, h, t_a) - 1e-12));
    parts = std::clamp(parts, 1L, 1L << 20);
    const Eigen::VectorXd v_saved = v;
    const double h_saved = h;
    bool ok = false;
    for (int halvings = 0; halvings <= 12 && !ok; ++halvings, parts *= 2) {
      ok = true;
      for (long s = 0; s < parts; ++s) {
        const double hs = (t_b - t_a) / static_cast<double>(parts);
        stepper.step(t_a + static_cast<double>(s) * hs, hs, v, h);
        if (!v.allFinite() || v.cwiseAbs().maxCoeff() > cap || !std::isfinite(h)) {
          ok = false;
          v = v_saved;
          h = h_saved;
          break;
        }
      }
    }
    if (!ok)
      throw divergence_error("stefan step rejected near t = " + format_double(t_a));
    record_step(j + 1);
    if ((j + 1) % per_snap == 0 || j + 1 == total_steps) record_snapshot(j + 1);
    last = j + 1;
    if (h >= horizon) {
      traj.regime = FrontTrajectory::Regime::spreading;
      traj.decisive = true;
    } else if (v.maxCoeff() <= options.vanish_sup_tol) {
      traj.regime = FrontTrajectory::Regime::vanishing;
      traj.decisive = true;
    }
    if (traj.decisive && options.early_stop) break;
  }
  if (!traj.decisive) {
    const double critical = M_PI / 2 * std::sqrt(model.d / model.decay.limit());
    traj.regime =
        h > critical ? FrontTrajectory::Regime::spreading : FrontTrajectory::Regime::vanishing;
  }
  if (traj.snapshot_times.back() != time_at(last)) record_snapshot(last);

  traj.u.resize(grid.nx, static_cast<Eigen::Index>(snaps.size()));
  for (size_t s = 0; s < snaps.size(); ++s) traj.u.col(static_cast<Eigen::Index>(s)) = snaps[s];
  return traj;
}

FrontSpeed front_speed(const std::vector<double>& times, const std::vector<double>& h_values,
                       double tail_fraction) {
  if (!(tail_fraction > 0) || !(tail_fraction < 1))
    throw validation_error("tail fraction must lie in (0, 1)");
  if (times.size() != h_values.size() || times.size() < 2)
    throw validation_error("front speed needs matching time and position samples");
  const double t_cut = times.back() - tail_fraction * (times.back() - times.front());
  size_t first = 0;
  while (first < times.size() && times[first] < t_cut) ++first;
  const size_t m = times.size() - first;
  if (m < 10) throw validation_error("tail window holds fewer than 10 samples");
  for (size_t i = first + 1; i < times.size(); ++i)
    if (h_values[i] < h_values[i - 1] - 1e-12 * (1.0 + std::abs(h_values[i - 1])))
      throw numeric_error("front positions are not monotone over the tail window");

  double st = 0, sh = 0;
  for (size_t i = first; i < times.size(); ++i) {
    st += times[i];
    sh += h_values[i];
  }
  const double mt = st / static_cast<double>(m), mh = sh / static_cast<double>(m);
  double sxx = 0, sxy = 0;
  for (size_t i = first; i < times.size(); ++i) {
    sxx += (times[i] - mt) * (times[i] - mt);
    sxy += (times[i] - mt) * (h_values[i] - mh);
  }
  FrontSpeed out;
  out.samples = static_cast<int>(m);
  out.k0 = sxx > 0 ? sxy / sxx : 0.0;
  out.intercept = mh - out.k0 * mt;
  double ss = 0;
  for (size_t i = first; i < times.size(); ++i) {
    const double e = h_values[i] - (out.intercept + out.k0 * times[i]);
    ss += e * e;
  }
  out.residual = std::sqrt(ss / static_cast<double>(m));
  return out;
}

FrontSpeed front_speed(const FrontTrajectory& traj, double tail_fraction) {
  return front_speed(traj.times, traj.h_values, tail_fraction);
}

LambdaBracket vanishing_threshold(const StefanModel& base, double lambda_lo, double lambda_hi,
                                  const GridSpec& grid, const StefanOptions& options,
                                  int bisections) {
  if (!(lambda_lo > 0) || !(lambda_hi > lambda_lo))
    throw validation_error("need 0 < lambda_lo < lambda_hi");
  StefanOptions opts = options;
  opts.early_stop = true;
  auto classify = [&](double lambda) {
    return solve_stefan(base.scaled_initial(lambda), grid, opts).regime;
  };
  const auto lo_regime = classify(lambda_lo);
  const auto hi_regime = classify(lambda_hi);
  if (lo_regime == hi_regime)
    throw numeric_error("lambda range does not straddle the threshold: both endpoints " +
                        std::string(lo_regime == FrontTrajectory::Regime::spreading ? "spread"
                                                                                    : "vanish"));
  if (lo_regime == FrontTrajectory::Regime::spreading)
    throw numeric_error("lambda_lo spreads while lambda_hi vanishes; regimes are inverted");
  LambdaBracket b{lambda_lo, lambda_hi};
  for (int i = 0; i < bisections; ++i) {
    const double mid = 0.5 * (b.lo + b.hi);
    if (classify(mid) == FrontTrajectory::Regime::vanishing)
      b.lo = mid;
    else
      b.hi = mid;
  }
  return b;
}

}  // namespace cpde
