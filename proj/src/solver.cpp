#include "cpde/solver.hpp"

#include <algorithm>
#include <cmath>

#include "cpde/errors.hpp"
#include "cpde/format.hpp"

namespace cpde {

namespace {

constexpr double kIncidenceEps = 1e-12;
constexpr int kMaxHalvings = 24;

/// Reaction terms evaluated explicitly at the start of each step.
using ReactionFn =
    std::function<void(double t, const std::vector<Eigen::VectorXd>& u, std::vector<Eigen::VectorXd>& out)>;

struct StepContext {
  std::vector<Tridiag<double>> ops;  // diffusion operator per component
  ReactionFn reaction;
  double divergence_cap = 0;
};

bool step_ok(const std::vector<Eigen::VectorXd>& u, double cap) {
  for (const auto& comp : u) {
    if (!comp.allFinite()) return false;
    if (comp.cwiseAbs().maxCoeff() > cap) return false;
  }
  return true;
}

/// One Crank-Nicolson diffusion step with explicit reaction over [t, t + h].
void single_step(const StepContext& ctx, double t, double h, std::vector<Eigen::VectorXd>& u) {
  const size_t nc = u.size();
  static thread_local std::vector<Eigen::VectorXd> reactions;
  reactions.assign(nc, Eigen::VectorXd());
  ctx.reaction(t, u, reactions);
  for (size_t c = 0; c < nc; ++c) {
    const Tridiag<double>& L = ctx.ops[c];
    const Eigen::Index n = L.size();
    Eigen::VectorXd rhs = u[c] + 0.5 * h * L.apply(u[c]) + h * reactions[c];
    Tridiag<double> lhs(n);
    lhs.lower = -0.5 * h * L.lower;
    lhs.diag = Eigen::VectorXd::Ones(n) - 0.5 * h * L.diag;
    lhs.upper = -0.5 * h * L.upper;
    u[c] = solve_tridiag(lhs, rhs);
  }
}

/// Advances [t_a, t_b], halving the sub-step on non-finite or exploding
/// values until the interval succeeds or the step budget runs out.
void advance(const StepContext& ctx, double t_a, double t_b, std::vector<Eigen::VectorXd>& u) {
  const std::vector<Eigen::VectorXd> saved = u;
  for (int halvings = 0; halvings <= kMaxHalvings; ++halvings) {
    const long substeps = 1L << halvings;
    const double h = (t_b - t_a) / static_cast<double>(substeps);
    bool ok = true;
    for (long s = 0; s < substeps; ++s) {
      single_step(ctx, t_a + static_cast<double>(s) * h, h, u);
      if (!step_ok(u, ctx.divergence_cap)) {
        ok = false;
        break;
      }
    }
    if (ok) return;
    u = saved;
  }
  throw divergence_error("time step rejected after " + std::to_string(kMaxHalvings) +
                         " halvings near t = " + format_double(t_a));
}

SolutionField run(const StepContext& ctx, const GridSpec& grid,
                  std::vector<Eigen::VectorXd> u) {
  SolutionField out;
  out.x = grid.nodes();
  const double span = grid.t_end - grid.t0;
  const long total_steps = std::max(1L, static_cast<long>(std::ceil(span / grid.dt - 1e-12)));
  const long per_snap =
      std::max(1L, static_cast<long>(std::ceil(static_cast<double>(total_steps) /
                                               static_cast<double>(grid.max_snapshots - 1))));
  auto time_at = [&](long j) {
    return j >= total_steps ? grid.t_end : grid.t0 + static_cast<double>(j) * grid.dt;
  };
  out.components.assign(u.size(), Eigen::MatrixXd());
  std::vector<std::vector<Eigen::VectorXd>> snaps(u.size());
  auto record = [&](long j) {
    out.times.push_back(time_at(j));
    for (size_t c = 0; c < u.size(); ++c) snaps[c].push_back(u[c]);
  };
  record(0);
  for (long j = 0; j < total_steps; ++j) {
    advance(ctx, time_at(j), time_at(j + 1), u);
    if ((j + 1) % per_snap == 0 || j + 1 == total_steps) record(j + 1);
  }
  for (size_t c = 0; c < u.size(); ++c) {
    Eigen::MatrixXd block(grid.nx, static_cast<Eigen::Index>(snaps[c].size()));
    for (size_t s = 0; s < snaps[c].size(); ++s) block.col(static_cast<Eigen::Index>(s)) = snaps[c][s];
    out.components[c] = std::move(block);
  }
  return out;
}

double incidence(double s, double i) {
  const double total = s + i;
  if (total < kIncidenceEps) return 0.0;
  return s * i / total;
}

}  // namespace

Tridiag<double> diffusion_operator(const GridSpec& grid, const std::function<double(double)>& a,
                                   const BoundaryCondition& bc) {
  const Eigen::Index n = grid.nx;
  const double dx = grid.dx();
  const double inv2 = 1.0 / (dx * dx);
  Eigen::VectorXd aph(n - 1);  // a at half nodes x_i + dx/2
  for (Eigen::Index i = 0; i + 1 < n; ++i) aph[i] = a(grid.l + (static_cast<double>(i) + 0.5) * dx);

  Tridiag<double> L(n);
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    L.lower[i] = aph[i - 1] * inv2;
    L.upper[i] = aph[i] * inv2;
    L.diag[i] = -(aph[i - 1] + aph[i]) * inv2;
  }
  // no-flux left end, mirrored ghost
  L.diag[0] = -2.0 * aph[0] * inv2;
  L.upper[0] = 2.0 * aph[0] * inv2;
  if (bc.kind == BoundaryCondition::Kind::neumann) {
    L.lower[n - 1] = 2.0 * aph[n - 2] * inv2;
    L.diag[n - 1] = -2.0 * aph[n - 2] * inv2;
  } else {
    // ghost node satisfying u_x(L) + alpha u(L) = 0
    L.lower[n - 1] = 2.0 * aph[n - 2] * inv2;
    L.diag[n - 1] = -2.0 * aph[n - 2] * (1.0 + dx * bc.robin_alpha) * inv2;
  }
  return L;
}

double trapezoid_mass(const GridSpec& grid, const Eigen::VectorXd& u) {
  const double dx = grid.dx();
  double m = 0.5 * (u[0] + u[u.size() - 1]);
  for (Eigen::Index i = 1; i + 1 < u.size(); ++i) m += u[i];
  return m * dx;
}

SolutionField solve_scalar(const ScalarModel& model, const GridSpec& grid,
                           const Eigen::VectorXd& init_values) {
  model.validate();
  grid.validate();
  if (init_values.size() != grid.nx)
    throw validation_error("initial values must match the grid node count");
  if (model.decay.form == DecaySpec::Form::ode_decay && grid.t0 < 1)
    throw validation_error("ode decay requires t0 >= 1");

  const Eigen::VectorXd xs = grid.nodes();
  Eigen::VectorXd h_values(grid.nx);
  for (Eigen::Index i = 0; i < grid.nx; ++i) h_values[i] = h_profile(model.heterogeneity, xs[i]);

  StepContext ctx;
  ctx.ops.push_back(diffusion_operator(grid, [&](double x) { return model.diffusivity(x); }, model.bc));
  ctx.divergence_cap = 1e8 * std::max({1.0, model.k, init_values.cwiseAbs().maxCoeff()});
  ctx.reaction = [&model, h_values](double t, const std::vector<Eigen::VectorXd>& u,
                                    std::vector<Eigen::VectorXd>& out) {
    const double r = decay_rate(model.decay, t);
    const auto& v = u[0].array();
    switch (model.family) {
      case ScalarFamily::logistic:
        out[0] = (r * v * (1.0 - v / model.k)).matrix();
        break;
      case ScalarFamily::linear:
        out[0] = (r * h_values.array() * v).matrix();
        break;
      case ScalarFamily::variable_diffusion_logistic:
        out[0] = (r * v * (h_values.array() - v / model.k)).matrix();
        break;
    }
  };

  SolutionField field = run(ctx, grid, {init_values});

  if (model.family != ScalarFamily::linear) {
    const double h_max = std::max(1.0, h_values.maxCoeff());
    const double hi = std::max(model.k * h_max, init_values.maxCoeff()) + 1e-8;
    const auto& block = field.components[0];
    if (block.minCoeff() < -1e-8 || block.maxCoeff() > hi) field.bounds_exceeded = true;
  }
  return field;
}

SolutionField solve_scalar(const ScalarModel& model, const GridSpec& grid,
                           const InitialDensity& phi) {
  if (std::abs(phi.domain_lo() - grid.l) > 1e-9 || std::abs(phi.domain_hi() - grid.L) > 1e-9)
    throw validation_error("initial density domain does not match the grid interval");
  return solve_scalar(model, grid, phi.values_at(grid.nodes()));
}

SolutionField solve_system(const SystemModel& model, const GridSpec& grid,
                           const std::vector<Eigen::VectorXd>& init_values) {
  model.validate();
  grid.validate();
  const size_t nc = static_cast<size_t>(model.component_count());
  if (init_values.size() != nc)
    throw validation_error("system needs one initial profile per component");
  double init_max = 0;
  for (const auto& v : init_values) {
    if (v.size() != grid.nx) throw validation_error("initial values must match the grid node count");
    if (v.minCoeff() < 0) throw validation_error("system initial data must be non-negative");
    init_max = std::max(init_max, v.maxCoeff());
  }
  for (const auto& rate : model.rates)
    if (rate.form == DecaySpec::Form::ode_decay && grid.t0 < 1)
      throw validation_error("ode decay requires t0 >= 1");

  StepContext ctx;
  for (size_t c = 0; c < nc; ++c) {
    const double dc = model.diffusivities[c];
    ctx.ops.push_back(diffusion_operator(grid, [dc](double) { return dc; }, model.bc));
  }
  ctx.divergence_cap = 1e8 * std::max({1.0, model.k1, model.k2, init_max});
  ctx.reaction = [&model](double t, const std::vector<Eigen::VectorXd>& u,
                          std::vector<Eigen::VectorXd>& out) {
    switch (model.family) {
      case SystemFamily::cooperative:
      case SystemFamily::competing: {
        const double sgn = model.family == SystemFamily::cooperative ? 1.0 : -1.0;
        const double r1 = decay_rate(model.rates[0], t);
        const double r2 = decay_rate(model.rates[1], t);
        const auto& u1 = u[0].array();
        const auto& u2 = u[1].array();
        out[0] = (r1 * u1 * (1.0 - u1 / model.k1) + sgn * model.alpha1 * u1 * u2).matrix();
        out[1] = (r2 * u2 * (1.0 - u2 / model.k2) + sgn * model.alpha2 * u1 * u2).matrix();
        break;
      }
      case SystemFamily::si: {
        const double r = decay_rate(model.rates[0], t);
        const Eigen::Index n = u[0].size();
        out[0].resize(n);
        out[1].resize(n);
        for (Eigen::Index i = 0; i < n; ++i) {
          const double inc = r * incidence(u[0][i], u[1][i]);
          out[0][i] = -inc;
          out[1][i] = inc;
        }
        break;
      }
      case SystemFamily::sir: {
        const Eigen::Index n = u[0].size();
        out[0].resize(n);
        out[1].resize(n);
        out[2].resize(n);
        for (Eigen::Index i = 0; i < n; ++i) {
          const double inc = model.beta_e * incidence(u[0][i], u[1][i]);
          const double removal = model.gamma_e * u[1][i];
          out[0][i] = -inc;
          out[1][i] = inc - removal;
          out[2][i] = removal;
        }
        break;
      }
    }
  };

  return run(ctx, grid, init_values);
}

SolutionField solve_system(const SystemModel& model, const GridSpec& grid,
                           const std::vector<InitialDensity>& inits) {
  std::vector<Eigen::VectorXd> values;
  values.reserve(inits.size());
  const Eigen::VectorXd xs = grid.nodes();
  for (const auto& phi : inits) {
    if (std::abs(phi.domain_lo() - grid.l) > 1e-9 || std::abs(phi.domain_hi() - grid.L) > 1e-9)
      throw validation_error("initial density domain does not match the grid interval");
    values.push_back(phi.values_at(xs));
  }
  return solve_system(model, grid, values);
}

SampledField sample_at_distances(const SolutionField& field, const std::vector<int>& distances,
                                 const std::vector<double>& times, int component,
                                 DensityMode mode) {
  if (field.times.empty() || field.x.size() == 0) throw validation_error("empty solution field");
  const auto& block = field.component(component);
  const double x_lo = field.x[0];
  const double x_hi = field.x[field.x.size() - 1];
  const double dx = field.x.size() > 1 ? field.x[1] - field.x[0] : 1.0;

  SampledField result;
  result.field.mode = mode;
  result.field.distances = distances;
  result.field.times = times;
  result.field.values.resize(static_cast<Eigen::Index>(distances.size()),
                             static_cast<Eigen::Index>(times.size()));

  std::vector<double> col_weight(times.size());
  std::vector<Eigen::Index> col_lo(times.size());
  for (size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    if (t < field.times.front() - 1e-9 || t > field.times.back() + 1e-9)
      throw validation_error("sample time " + format_double(t) + " outside solved range");
    auto it = std::lower_bound(field.times.begin(), field.times.end(), t);
    if (it == field.times.end()) --it;
    Eigen::Index hi = it - field.times.begin();
    if (hi == 0) {
      col_lo[k] = 0;
      col_weight[k] = 0;
    } else {
      col_lo[k] = hi - 1;
      const double t0 = field.times[static_cast<size_t>(hi - 1)];
      const double t1 = field.times[static_cast<size_t>(hi)];
      col_weight[k] = (t - t0) / (t1 - t0);
    }
  }

  for (size_t r = 0; r < distances.size(); ++r) {
    const double x = distances[r];
    if (x < x_lo - 1e-9 || x > x_hi + 1e-9)
      throw validation_error("sample distance " + std::to_string(distances[r]) +
                             " outside grid range");
    const double pos = (x - x_lo) / dx;
    Eigen::Index i = static_cast<Eigen::Index>(std::llround(pos));
    double wx = 0;
    Eigen::Index i2 = i;
    if (std::abs(pos - static_cast<double>(i)) > 1e-9) {
      result.off_grid_interpolated = true;
      i = static_cast<Eigen::Index>(std::floor(pos));
      i2 = std::min(i + 1, static_cast<Eigen::Index>(field.x.size() - 1));
      wx = pos - static_cast<double>(i);
    }
    for (size_t k = 0; k < times.size(); ++k) {
      const Eigen::Index c0 = col_lo[k];
      const Eigen::Index c1 = std::min<Eigen::Index>(c0 + 1, block.cols() - 1);
      const double w = col_weight[k];
      const double v0 = (1 - wx) * block(i, c0) + wx * block(i2, c0);
      const double v1 = (1 - wx) * block(i, c1) + wx * block(i2, c1);
      result.field.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
          (1 - w) * v0 + w * v1;
    }
  }
  return result;
}

}  // namespace cpde
