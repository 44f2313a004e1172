#include "cpde/models.hpp"

namespace cpde {

DecaySpec DecaySpec::ode(double alpha, double beta, double gamma) {
  if (alpha <= 0) throw validation_error("ode decay needs alpha > 0");
  if (beta < 0 || gamma < 0) throw validation_error("decay rates must be non-negative");
  DecaySpec s;
  s.form = Form::ode_decay;
  s.alpha = alpha;
  s.beta = beta;
  s.gamma = gamma;
  return s;
}

DecaySpec DecaySpec::offset(double a, double b, double c) {
  if (a < 0 || b < 0 || c < 0) throw validation_error("decay rates must be non-negative");
  DecaySpec s;
  s.form = Form::offset_exp;
  s.a = a;
  s.b = b;
  s.c = c;
  return s;
}

DecaySpec DecaySpec::constant_rate(double r) {
  if (r < 0) throw validation_error("decay rates must be non-negative");
  DecaySpec s;
  s.form = Form::constant;
  s.r = r;
  return s;
}

double DecaySpec::limit() const {
  switch (form) {
    case Form::ode_decay: return beta / alpha;
    case Form::offset_exp: return a;
    case Form::constant: return r;
  }
  return 0;
}

double decay_rate(const DecaySpec& spec, double t) {
  switch (spec.form) {
    case DecaySpec::Form::ode_decay: {
      if (spec.alpha == 0) throw validation_error("ode decay needs alpha > 0");
      if (t < 1) throw domain_error("ode decay defined for t >= 1");
      const double residual = spec.beta / spec.alpha;
      return residual - std::exp(-spec.alpha * (t - 1)) * (residual - spec.gamma);
    }
    case DecaySpec::Form::offset_exp:
      return spec.a + spec.b * std::exp(-spec.c * t);
    case DecaySpec::Form::constant:
      return spec.r;
  }
  return 0;
}

HeterogeneitySpec HeterogeneitySpec::quadratic(double rho, double sigma) {
  HeterogeneitySpec s;
  s.form = Form::quadratic;
  s.rho = rho;
  s.sigma = sigma;
  return s;
}

double h_profile(const HeterogeneitySpec& spec, double x) {
  if (spec.form == HeterogeneitySpec::Form::constant) return 1.0;
  return -(x - spec.rho) * (x - spec.sigma);
}

BoundaryCondition BoundaryCondition::robin(double alpha) {
  if (alpha < 0) throw validation_error("robin coefficient must be >= 0");
  BoundaryCondition bc;
  bc.kind = Kind::robin;
  bc.robin_alpha = alpha;
  return bc;
}

void ScalarModel::validate() const {
  if (d <= 0) throw validation_error("diffusivity d must be > 0");
  if (b < 0) throw validation_error("diffusivity decay b must be >= 0");
  switch (family) {
    case ScalarFamily::logistic:
      if (k <= 0) throw validation_error("carrying capacity K must be > 0");
      if (heterogeneity.form != HeterogeneitySpec::Form::constant)
        throw validation_error("logistic family uses constant heterogeneity");
      if (b != 0) throw validation_error("logistic family uses constant diffusivity (b = 0)");
      break;
    case ScalarFamily::linear:
      if (b != 0) throw validation_error("linear family uses constant diffusivity (b = 0)");
      break;
    case ScalarFamily::variable_diffusion_logistic:
      if (k <= 0) throw validation_error("carrying capacity K must be > 0");
      break;
  }
}

void SystemModel::validate() const {
  const size_t n = static_cast<size_t>(component_count());
  if (diffusivities.size() != n)
    throw validation_error("system model needs one diffusivity per component");
  for (double di : diffusivities)
    if (di <= 0) throw validation_error("diffusivities must be > 0");
  switch (family) {
    case SystemFamily::cooperative:
    case SystemFamily::competing:
      if (rates.size() != 2) throw validation_error("two growth rates required");
      if (k1 <= 0 || k2 <= 0) throw validation_error("capacities must be > 0");
      if (alpha1 < 0 || alpha2 < 0) throw validation_error("interaction coefficients must be >= 0");
      break;
    case SystemFamily::si:
      if (rates.size() != 1) throw validation_error("si needs one influence rate");
      break;
    case SystemFamily::sir:
      if (beta_e < 0 || gamma_e < 0) throw validation_error("epidemiological rates must be >= 0");
      break;
  }
}

Eigen::VectorXd GridSpec::nodes() const {
  Eigen::VectorXd xs(nx);
  const double h = dx();
  for (Eigen::Index i = 0; i < nx; ++i) xs[i] = l + static_cast<double>(i) * h;
  xs[nx - 1] = L;
  return xs;
}

Eigen::Index GridSpec::node_of(double x) const {
  const double pos = (x - l) / dx();
  const Eigen::Index i = static_cast<Eigen::Index>(std::llround(pos));
  if (i < 0 || i >= nx) return -1;
  if (std::abs(pos - static_cast<double>(i)) > 1e-9) return -1;
  return i;
}

void GridSpec::validate() const {
  if (!(L > l)) throw validation_error("grid needs L > l");
  if (nx < 8) throw validation_error("grid needs nx >= 8");
  if (!(dt > 0)) throw validation_error("grid needs dt > 0");
  if (!(t_end > t0)) throw validation_error("grid needs t_end > t0");
  if (max_snapshots < 2) throw validation_error("grid needs max_snapshots >= 2");
}

GridSpec GridSpec::unit_aligned(double l, double L, int points_per_unit, double t0, double t_end,
                                double dt) {
  if (points_per_unit < 1) throw validation_error("points_per_unit must be >= 1");
  const double span = L - l;
  const double cells = span * points_per_unit;
  const double rounded = std::round(cells);
  if (std::abs(cells - rounded) > 1e-9)
    throw validation_error("interval length must be a whole number of grid cells");
  GridSpec g;
  g.l = l;
  g.L = L;
  g.nx = static_cast<Eigen::Index>(rounded) + 1;
  g.t0 = t0;
  g.t_end = t_end;
  g.dt = dt;
  g.validate();
  return g;
}

}  // namespace cpde
