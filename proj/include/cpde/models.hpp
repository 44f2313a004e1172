#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "cpde/errors.hpp"

namespace cpde {

/// Time-dependent intrinsic growth rate r(t).
struct DecaySpec {
  enum class Form { ode_decay, offset_exp, constant };
  Form form = Form::constant;
  // ode_decay: r(t) = beta/alpha - exp(-alpha (t-1)) (beta/alpha - gamma), r(1) = gamma
  double alpha = 0, beta = 0, gamma = 0;
  // offset_exp: r(t) = A + B exp(-C t)
  double a = 0, b = 0, c = 0;
  // constant: r(t) = r (long-term regime)
  double r = 0;

  static DecaySpec ode(double alpha, double beta, double gamma);
  static DecaySpec offset(double a, double b, double c);
  static DecaySpec constant_rate(double r);

  /// Limit of r(t) as t -> infinity.
  double limit() const;
};

double decay_rate(const DecaySpec& spec, double t);

/// Distance-dependent growth modifier h(x).
struct HeterogeneitySpec {
  enum class Form { constant, quadratic };
  Form form = Form::constant;
  double rho = 0, sigma = 0;  // quadratic roots; h(x) = -(x - rho)(x - sigma)

  static HeterogeneitySpec constant_one() { return {}; }
  static HeterogeneitySpec quadratic(double rho, double sigma);
};

double h_profile(const HeterogeneitySpec& spec, double x);

enum class ScalarFamily { logistic, linear, variable_diffusion_logistic };

struct BoundaryCondition {
  enum class Kind { neumann, robin };
  Kind kind = Kind::neumann;
  double robin_alpha = 0;  // u_x(L) + robin_alpha * u(L) = 0, left end stays Neumann

  static BoundaryCondition neumann() { return {}; }
  static BoundaryCondition robin(double alpha);
};

/// One scalar reaction-diffusion model:
///   logistic:            I_t = d I_xx + r(t) I (1 - I/K)
///   linear:              I_t = d I_xx + r(t) h(x) I
///   variable diffusion:  I_t = (d e^{-bx} I_x)_x + r(t) I (h(x) - I/K)
struct ScalarModel {
  ScalarFamily family = ScalarFamily::logistic;
  double d = 1;
  double b = 0;  // diffusivity decay, variable-diffusion family only
  double k = 1;  // carrying capacity, unused by the linear family
  DecaySpec decay;
  HeterogeneitySpec heterogeneity;
  BoundaryCondition bc;

  double diffusivity(double x) const { return d * std::exp(-b * x); }
  void validate() const;
};

enum class SystemFamily { cooperative, competing, si, sir };

/// Coupled two- or three-component models. Meaning of the fields by family:
///   cooperative/competing: rates[0..1], k1, k2, alpha1, alpha2
///   si:                    rates[0] is the influence rate r(t)
///   sir:                   beta_e (adoption) and gamma_e (removal), constant
struct SystemModel {
  SystemFamily family = SystemFamily::cooperative;
  std::vector<double> diffusivities;
  std::vector<DecaySpec> rates;
  double k1 = 1, k2 = 1;
  double alpha1 = 0, alpha2 = 0;
  double beta_e = 0, gamma_e = 0;
  BoundaryCondition bc;

  int component_count() const { return family == SystemFamily::sir ? 3 : 2; }
  void validate() const;
};

/// Uniform space-time grid on [l, L] x [t0, t_end]. Nodes are
/// x_i = l + i dx with dx = (L - l)/(nx - 1); choosing nx so that 1/dx is an
/// integer puts every integer distance on a node.
struct GridSpec {
  double l = 0, L = 1;
  Eigen::Index nx = 9;
  double t0 = 1, t_end = 2;
  double dt = 1e-2;
  /// Solution snapshots kept per run; intermediate steps are discarded.
  Eigen::Index max_snapshots = 2001;

  double dx() const { return (L - l) / static_cast<double>(nx - 1); }
  Eigen::VectorXd nodes() const;
  /// Node index holding x exactly, or -1 when x falls between nodes.
  Eigen::Index node_of(double x) const;
  void validate() const;

  /// Grid with nodes at every multiple of 1/points_per_unit, so integer
  /// distances in [l, L] sit on nodes.
  static GridSpec unit_aligned(double l, double L, int points_per_unit, double t0, double t_end,
                               double dt);
};

/// Dense solver output: one nodes-by-snapshots block per component.
struct SolutionField {
  Eigen::VectorXd x;                     // grid nodes
  std::vector<double> times;             // snapshot times
  std::vector<Eigen::MatrixXd> components;  // each nx x times.size()
  /// Set when a run left the expected range (only possible with negative h).
  bool bounds_exceeded = false;

  const Eigen::MatrixXd& component(int i = 0) const { return components.at(static_cast<size_t>(i)); }
};

}  // namespace cpde
