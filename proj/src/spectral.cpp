#include "cpde/spectral.hpp"

#include <cmath>

#include "cpde/errors.hpp"
#include "cpde/format.hpp"
#include "cpde/polyroots.hpp"
#include "cpde/tridiag.hpp"

namespace cpde {

double spectral_radius(const Eigen::MatrixXd& m) {
  double radius = 0;
  for (const auto& z : small_matrix_eigenvalues(m)) radius = std::max(radius, std::abs(z));
  return radius;
}

double principal_growth(const Eigen::MatrixXd& m) {
  double growth = -std::numeric_limits<double>::infinity();
  for (const auto& z : small_matrix_eigenvalues(m)) growth = std::max(growth, z.real());
  return growth;
}

bool Linearization::cooperative_type() const {
  for (Eigen::Index i = 0; i < jacobian0.rows(); ++i)
    for (Eigen::Index j = 0; j < jacobian0.cols(); ++j)
      if (i != j && jacobian0(i, j) < 0) return false;
  return true;
}

void Linearization::validate() const {
  if (jacobian0.rows() != jacobian0.cols())
    throw validation_error("linearization Jacobian must be square");
  if (diffusion.size() != jacobian0.rows())
    throw validation_error("one diffusivity per linearized component required");
  if (diffusion.size() < 1 || diffusion.size() > 4)
    throw validation_error("speed machinery supports 1 to 4 components");
  for (Eigen::Index i = 0; i < diffusion.size(); ++i)
    if (diffusion[i] <= 0) throw validation_error("diffusivities must be > 0");
}

double speed_function(const Linearization& lin, double lambda) {
  if (lambda <= 0) throw domain_error("speed function defined for lambda > 0");
  Eigen::MatrixXd a = lin.jacobian0;
  for (Eigen::Index i = 0; i < lin.diffusion.size(); ++i)
    a(i, i) += lin.diffusion[i] * lambda * lambda;
  return principal_growth(a) / lambda;
}

namespace {

std::vector<std::pair<double, double>> sample_profile(const Linearization& lin,
                                                      double lambda_star) {
  std::vector<std::pair<double, double>> profile;
  const int n = 121;
  const double lo = std::log(lambda_star / 1e3);
  const double hi = std::log(lambda_star * 1e3);
  profile.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double lambda = std::exp(lo + (hi - lo) * i / (n - 1));
    profile.emplace_back(lambda, speed_function(lin, lambda));
  }
  return profile;
}

SpeedResult closed_form_result(double c_star, double lambda_star, const Linearization& lin) {
  SpeedResult res;
  res.c_star = c_star;
  res.lambda_star = lambda_star;
  res.method = SpeedResult::Method::closed_form;
  res.profile = sample_profile(lin, lambda_star);
  return res;
}

}  // namespace

SpeedResult min_speed_numeric(const Linearization& lin) {
  lin.validate();
  if (!lin.cooperative_type())
    throw model_error("numeric speed minimization requires non-negative off-diagonals");

  // geometric scan for an interior bracket of the minimum
  const double log_lo = std::log(1e-6), log_hi = std::log(1e6);
  const int scan = 241;
  int best = -1;
  double best_val = std::numeric_limits<double>::infinity();
  auto lambda_at = [&](int i) { return std::exp(log_lo + (log_hi - log_lo) * i / (scan - 1)); };
  for (int i = 0; i < scan; ++i) {
    const double v = speed_function(lin, lambda_at(i));
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  if (best <= 0 || best >= scan - 1)
    throw numeric_error("no interior minimum of the speed function in [1e-6, 1e6]");

  // golden section on log lambda
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(lambda_at(best - 1));
  double b = std::log(lambda_at(best + 1));
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = speed_function(lin, std::exp(x1));
  double f2 = speed_function(lin, std::exp(x2));
  while (b - a > 1e-12) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = speed_function(lin, std::exp(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = speed_function(lin, std::exp(x2));
    }
  }
  SpeedResult res;
  res.lambda_star = std::exp((a + b) / 2);
  res.c_star = speed_function(lin, res.lambda_star);
  res.method = SpeedResult::Method::numeric;
  // unimodality witness: the minimum must hold against doubled/halved lambda
  const double tol = 1e-9 * std::max(1.0, std::abs(res.c_star));
  if (speed_function(lin, res.lambda_star / 2) < res.c_star - tol ||
      speed_function(lin, res.lambda_star * 2) < res.c_star - tol)
    throw numeric_error("speed function is not locally minimal at the computed lambda");
  res.profile = sample_profile(lin, res.lambda_star);
  return res;
}

SpeedResult min_speed_cooperative(double d1, double r1, double d2, double r2, double a1, double a2,
                                  double k1, double k2) {
  if (d1 <= 0 || d2 <= 0) throw validation_error("diffusivities must be > 0");
  const double margin = r1 * r2 - a1 * a2 * k1 * k2;
  if (!(margin > 0)) {
    const double denom = margin;
    throw model_error(
        "no positive coexistence equilibrium: r1 r2 - a1 a2 k1 k2 = " + format_double(margin) +
        " <= 0 (e1 = k1 r2 (a1 k2 + r1)/" + format_double(denom) + ", e2 = k2 r1 (a2 k1 + r2)/" +
        format_double(denom) + ")");
  }
  Linearization lin;
  lin.diffusion = Eigen::Vector2d(d1, d2);
  lin.jacobian0 = Eigen::Matrix2d{{r1, 0.0}, {0.0, r2}};
  if (d1 >= d2 && r1 >= r2)
    return closed_form_result(2 * std::sqrt(d1 * r1), std::sqrt(r1 / d1), lin);
  if (d2 >= d1 && r2 >= r1)
    return closed_form_result(2 * std::sqrt(d2 * r2), std::sqrt(r2 / d2), lin);
  return min_speed_numeric(lin);
}

SpeedResult min_speed_competition(double d1, double r1, double a1, double k2) {
  if (d1 <= 0) throw validation_error("diffusivity must be > 0");
  const double net = r1 - a1 * k2;
  if (!(net > 0))
    throw model_error("competition blocks invasion: r1 - a1 k2 = " + format_double(net) + " <= 0");
  Linearization lin;
  lin.diffusion = Eigen::VectorXd::Constant(1, d1);
  lin.jacobian0 = Eigen::MatrixXd::Constant(1, 1, net);
  return closed_form_result(2 * std::sqrt(d1 * net), std::sqrt(net / d1), lin);
}

SpeedResult min_speed_sir(double d2, double beta, double gamma) {
  if (d2 <= 0) throw validation_error("diffusivity must be > 0");
  if (!(beta > gamma))
    throw model_error("no traveling wave: R0 = beta/gamma <= 1 (beta = " + format_double(beta) +
                      ", gamma = " + format_double(gamma) + ")");
  const double net = beta - gamma;
  return closed_form_result(2 * std::sqrt(d2 * net), std::sqrt(net / d2),
                            sir_reduced_linearization(d2, beta, gamma));
}

Linearization sir_reduced_linearization(double d2, double beta, double gamma) {
  Linearization lin;
  lin.diffusion = Eigen::VectorXd::Constant(1, d2);
  lin.jacobian0 = Eigen::MatrixXd::Constant(1, 1, beta - gamma);
  return lin;
}

namespace {

struct EigAssembly {
  Eigen::VectorXd stiff_diag, stiff_off;  // symmetric tridiagonal A
  Eigen::VectorXd mass;                   // diagonal B (lumped, > 0)
};

EigAssembly assemble_eigenproblem(double d, double b, const HeterogeneitySpec& h,
                                  double robin_alpha, double l, double L, Eigen::Index nx) {
  if (d <= 0) throw validation_error("diffusivity must be > 0");
  if (robin_alpha < 0) throw validation_error("robin coefficient must be >= 0");
  if (!(L > l)) throw validation_error("interval needs L > l");
  if (nx < 8) throw validation_error("eigenproblem needs nx >= 8");
  const double dx = (L - l) / static_cast<double>(nx - 1);
  EigAssembly e;
  e.stiff_diag = Eigen::VectorXd::Zero(nx);
  e.stiff_off = Eigen::VectorXd::Zero(nx - 1);
  e.mass = Eigen::VectorXd::Zero(nx);
  for (Eigen::Index i = 0; i + 1 < nx; ++i) {
    const double am = d * std::exp(-b * (l + (static_cast<double>(i) + 0.5) * dx));
    e.stiff_diag[i] += am / dx;
    e.stiff_diag[i + 1] += am / dx;
    e.stiff_off[i] = -am / dx;
  }
  e.stiff_diag[nx - 1] += robin_alpha * d * std::exp(-b * L);
  for (Eigen::Index i = 0; i < nx; ++i) {
    const double x = l + static_cast<double>(i) * dx;
    const double hv = h_profile(h, x);
    if (hv <= 0)
      throw model_error("heterogeneity h(x) must be positive on [l, L]; h(" + format_double(x) +
                        ") = " + format_double(hv));
    const double w = (i == 0 || i == nx - 1) ? dx / 2 : dx;
    e.mass[i] = hv * w;
  }
  return e;
}

/// Number of eigenvalues of the symmetric tridiagonal (diag, off) below sigma.
int sturm_count(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, double sigma) {
  int count = 0;
  double q = diag[0] - sigma;
  if (q < 0) ++count;
  for (Eigen::Index i = 1; i < diag.size(); ++i) {
    double denom = q;
    if (denom == 0) denom = 1e-300;
    q = diag[i] - sigma - off[i - 1] * off[i - 1] / denom;
    if (q < 0) ++count;
  }
  return count;
}

}  // namespace

EigenpairResult principal_eigenvalue(double d, double b, const HeterogeneitySpec& h,
                                     double robin_alpha, double l, double L, Eigen::Index nx) {
  const EigAssembly e = assemble_eigenproblem(d, b, h, robin_alpha, l, L, nx);
  const Eigen::Index n = nx;

  // standard form C = B^{-1/2} A B^{-1/2}, still symmetric tridiagonal
  Eigen::VectorXd scale = e.mass.cwiseSqrt();
  Eigen::VectorXd c_diag(n), c_off(n - 1);
  for (Eigen::Index i = 0; i < n; ++i) c_diag[i] = e.stiff_diag[i] / e.mass[i];
  for (Eigen::Index i = 0; i + 1 < n; ++i) c_off[i] = e.stiff_off[i] / (scale[i] * scale[i + 1]);

  // Gershgorin bracket, then bisection onto the smallest eigenvalue
  double lo = c_diag[0], hi = c_diag[0], span = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double r = 0;
    if (i > 0) r += std::abs(c_off[i - 1]);
    if (i + 1 < n) r += std::abs(c_off[i]);
    lo = std::min(lo, c_diag[i] - r);
    hi = std::max(hi, c_diag[i] + r);
  }
  span = hi - lo;
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * span; ++iter) {
    const double mid = (lo + hi) / 2;
    if (sturm_count(c_diag, c_off, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  const double mu_estimate = (lo + hi) / 2;

  // shifted inverse iteration; sigma below mu keeps the system positive definite
  const double sigma = mu_estimate - std::max(1e-12 * span, 4 * (hi - lo));
  Tridiag<double> shifted(n);
  shifted.diag = c_diag.array() - sigma;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    shifted.upper[i] = c_off[i];
    shifted.lower[i + 1] = c_off[i];
  }
  Eigen::VectorXd y = Eigen::VectorXd::Ones(n).normalized();
  double mu = mu_estimate;
  bool converged = false;
  for (int iter = 0; iter < 100; ++iter) {
    y = solve_tridiag(shifted, y).normalized();
    Eigen::VectorXd cy(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double s = c_diag[i] * y[i];
      if (i > 0) s += c_off[i - 1] * y[i - 1];
      if (i + 1 < n) s += c_off[i] * y[i + 1];
      cy[i] = s;
    }
    mu = y.dot(cy);
    if ((cy - mu * y).norm() <= 1e-12 * std::max(1.0, std::abs(mu) + span * 1e-3)) {
      converged = true;
      break;
    }
  }
  if (!converged) throw numeric_error("inverse iteration failed to converge");

  EigenpairResult result;
  result.x = Eigen::VectorXd::LinSpaced(n, l, L);
  Eigen::VectorXd u = (y.array() / scale.array()).matrix();
  if (u.sum() < 0) u = -u;
  const double peak = u.cwiseAbs().maxCoeff();
  u /= peak;
  if (u.minCoeff() < -1e-8)
    throw numeric_error("computed eigenfunction changes sign; not the principal pair");
  result.eigenfunction = u;
  // Rayleigh quotient in the original (A, B) pencil
  double num = 0, den = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = e.stiff_diag[i] * u[i];
    if (i > 0) s += e.stiff_off[i - 1] * u[i - 1];
    if (i + 1 < n) s += e.stiff_off[i] * u[i + 1];
    num += u[i] * s;
    den += e.mass[i] * u[i] * u[i];
  }
  result.mu = num / den;
  return result;
}

double variational_quotient(double d, double b, const HeterogeneitySpec& h, double robin_alpha,
                            double l, double L, const Eigen::VectorXd& u) {
  const EigAssembly e = assemble_eigenproblem(d, b, h, robin_alpha, l, L, u.size());
  double num = 0, den = 0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    num += e.mass[i] * u[i] * u[i];
    double s = e.stiff_diag[i] * u[i];
    if (i > 0) s += e.stiff_off[i - 1] * u[i - 1];
    if (i + 1 < u.size()) s += e.stiff_off[i] * u[i + 1];
    den += u[i] * s;
  }
  return num / den;
}

double persistence_threshold(double mu1_plus, double r_infinity) {
  if (!(r_infinity > 0)) throw validation_error("persistence threshold needs r_infinity > 0");
  return mu1_plus / r_infinity;
}

}  // namespace cpde
