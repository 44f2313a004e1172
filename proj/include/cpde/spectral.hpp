#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cpde/models.hpp"

namespace cpde {

/// Largest eigenvalue modulus of a square matrix of size 1..4.
double spectral_radius(const Eigen::MatrixXd& m);

/// Largest real part over the eigenvalues (the principal growth rate; equals
/// the Perron root for matrices with non-negative off-diagonals).
double principal_growth(const Eigen::MatrixXd& m);

/// Linearized system at the invaded state: diffusivities and Jacobian f'(0).
struct Linearization {
  Eigen::VectorXd diffusion;
  Eigen::MatrixXd jacobian0;

  /// Off-diagonals of the Jacobian all non-negative, the regime the
  /// variational speed formula covers.
  bool cooperative_type() const;
  void validate() const;
};

/// Candidate wave speed Phi(lambda) = growth(diag(d_i lambda^2) + f'(0)) / lambda.
double speed_function(const Linearization& lin, double lambda);

struct SpeedResult {
  enum class Method { closed_form, numeric };
  double c_star = 0;
  double lambda_star = 0;
  Method method = Method::numeric;
  std::vector<std::pair<double, double>> profile;  // sampled (lambda, Phi)
};

/// Minimum of Phi over lambda > 0: golden-section in log lambda after a
/// geometric bracket scan over [1e-6, 1e6].
SpeedResult min_speed_numeric(const Linearization& lin);

/// Cooperative two-source speed. Closed form 2 sqrt(d1 r1) (resp. 2 sqrt(d2 r2))
/// in the ordered cases; unordered parameters fall back to the numeric path.
/// Requires r1 r2 > a1 a2 k1 k2 so the coexistence equilibrium exists.
SpeedResult min_speed_cooperative(double d1, double r1, double d2, double r2, double a1, double a2,
                                  double k1, double k2);

/// Invasion speed of the stronger competitor: 2 sqrt(d1 (r1 - a1 k2)),
/// requires r1 > a1 k2.
SpeedResult min_speed_competition(double d1, double r1, double a1, double k2);

/// Epidemic wave cut-off speed 2 sqrt(d2 (beta - gamma)), requires beta > gamma.
SpeedResult min_speed_sir(double d2, double beta, double gamma);

/// Scalar linearization of the infected equation at the adoption-free state,
/// the cooperative-type reduction the numeric minimizer accepts for SIR.
Linearization sir_reduced_linearization(double d2, double beta, double gamma);

struct EigenpairResult {
  double mu = 0;                  // principal eigenvalue mu_1^+
  Eigen::VectorXd x;              // grid nodes
  Eigen::VectorXd eigenfunction;  // positive, normalized to max 1
};

/// Principal eigenpair of -(a(x) u')' = mu h(x) u with u'(l) = 0 and
/// u'(L) + alpha u(L) = 0, a(x) = d e^{-bx}, h positive on [l, L].
/// Symmetric tridiagonal discretization, Sturm bisection plus inverse
/// iteration.
EigenpairResult principal_eigenvalue(double d, double b, const HeterogeneitySpec& h,
                                     double robin_alpha, double l, double L, Eigen::Index nx);

/// Discrete variational quotient int h u^2 / (int a (u')^2 + alpha a(L) u(L)^2)
/// on the same grid; equals 1/mu for the principal eigenfunction.
double variational_quotient(double d, double b, const HeterogeneitySpec& h, double robin_alpha,
                            double l, double L, const Eigen::VectorXd& u);

/// Persistence/extinction threshold lambda* = mu_1^+ / r_infinity.
double persistence_threshold(double mu1_plus, double r_infinity);

}  // namespace cpde
