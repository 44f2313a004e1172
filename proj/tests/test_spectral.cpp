#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cpde/errors.hpp"
#include "cpde/solver.hpp"
#include "cpde/spectral.hpp"

using namespace cpde;

namespace {

Linearization scalar_lin(double d, double growth) {
  Linearization lin;
  lin.diffusion = Eigen::VectorXd::Constant(1, d);
  lin.jacobian0 = Eigen::MatrixXd::Constant(1, 1, growth);
  return lin;
}

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) / 9007199254740992.0;
}

}  // namespace

TEST_CASE("spectral radius: closed forms and small-matrix roots") {
  CHECK(spectral_radius(Eigen::Matrix2d::Identity()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spectral_radius(Eigen::Vector2d(3, -5).asDiagonal().toDenseMatrix()) ==
        doctest::Approx(5.0).epsilon(1e-12));

  Eigen::Matrix2d sir_jac;
  sir_jac << 0, -1, 0, 0.75;  // SIR Jacobian at the adoption-free state, beta=1 gamma=0.25
  CHECK(spectral_radius(sir_jac) == doctest::Approx(0.75).epsilon(1e-12));

  Eigen::Matrix2d rot;
  rot << 0, -1, 1, 0;  // complex pair, modulus 1
  CHECK(spectral_radius(rot) == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::Matrix3d tri;
  tri << 2, 1, 0, 0, 3, 1, 0, 0, -4;
  CHECK(spectral_radius(tri) == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(principal_growth(tri) == doctest::Approx(3.0).epsilon(1e-9));

  Eigen::Matrix4d m4 = Eigen::Vector4d(1.5, -2.5, 0.25, 2.0).asDiagonal();
  m4(0, 1) = 0.3;
  CHECK(spectral_radius(m4) == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(principal_growth(m4) == doctest::Approx(2.0).epsilon(1e-9));

  CHECK_THROWS_AS(spectral_radius(Eigen::MatrixXd::Identity(5, 5)), validation_error);
}

TEST_CASE("speed function values") {
  CHECK(speed_function(scalar_lin(1, 1), 1.0) == doctest::Approx(2.0).epsilon(1e-12));
  // calculus minimum of (lambda^2 + 1)/lambda at lambda = 1
  CHECK(speed_function(scalar_lin(1, 1), 1.0) <= speed_function(scalar_lin(1, 1), 0.8));
  CHECK(speed_function(scalar_lin(1, 1), 1.0) <= speed_function(scalar_lin(1, 1), 1.2));

  Linearization sir;
  sir.diffusion = Eigen::Vector2d(1, 1);
  sir.jacobian0 = Eigen::Matrix2d{{0.0, -1.0}, {0.0, 0.75}};
  CHECK(speed_function(sir, 0.5) == doctest::Approx((0.25 + 0.75) / 0.5).epsilon(1e-12));
  CHECK_THROWS_AS(speed_function(sir, 0.0), domain_error);
  CHECK_THROWS_AS(speed_function(sir, -1.0), domain_error);
}

TEST_CASE("numeric minimum speed: fisher and friends") {
  const SpeedResult fisher = min_speed_numeric(scalar_lin(1, 1));
  CHECK(fisher.c_star == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fisher.lambda_star == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(fisher.method == SpeedResult::Method::numeric);
  CHECK_FALSE(fisher.profile.empty());

  Linearization coop;
  coop.diffusion = Eigen::Vector2d(1, 0.5);
  coop.jacobian0 = Eigen::Vector2d(1, 0.5).asDiagonal();
  CHECK(min_speed_numeric(coop).c_star == doctest::Approx(2.0).epsilon(1e-9));

  const SpeedResult sir = min_speed_numeric(sir_reduced_linearization(1, 1, 0.25));
  CHECK(sir.c_star == doctest::Approx(2 * std::sqrt(0.75)).epsilon(1e-9));

  Linearization bad;
  bad.diffusion = Eigen::Vector2d(1, 1);
  bad.jacobian0 = Eigen::Matrix2d{{0.0, -1.0}, {0.0, 0.75}};
  CHECK_THROWS_AS(min_speed_numeric(bad), model_error);
}

TEST_CASE("unimodality witness at the computed minimizer") {
  for (double d : {0.3, 1.0, 4.0}) {
    for (double r : {0.2, 1.0, 2.5}) {
      const SpeedResult res = min_speed_numeric(scalar_lin(d, r));
      CHECK(speed_function(scalar_lin(d, r), res.lambda_star / 2) >= res.c_star - 1e-9);
      CHECK(speed_function(scalar_lin(d, r), res.lambda_star * 2) >= res.c_star - 1e-9);
    }
  }
}

TEST_CASE("cooperative speed: ordered closed forms, gate, numeric fallback") {
  const SpeedResult a = min_speed_cooperative(1, 1, 1, 1, 0.1, 0.1, 1, 1);
  CHECK(a.c_star == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(a.method == SpeedResult::Method::closed_form);

  const SpeedResult b = min_speed_cooperative(2, 0.5, 1, 0.5, 0.0, 0.0, 1, 1);
  CHECK(b.c_star == doctest::Approx(2.0).epsilon(1e-12));  // 2 sqrt(2 * 0.5)

  CHECK_THROWS_AS(min_speed_cooperative(1, 1, 1, 1, 2, 2, 1, 1), model_error);  // a1 a2 k1 k2 >= r1 r2

  // unordered (d2 > d1 but r1 > r2): numeric result at the branch crossing
  const SpeedResult c = min_speed_cooperative(1, 1, 2, 0.5, 0.01, 0.01, 1, 1);
  CHECK(c.method == SpeedResult::Method::numeric);
  CHECK(c.c_star == doctest::Approx(1.5 * std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("competition speed: closed form, fisher limit, gate") {
  CHECK(min_speed_competition(1, 1, 0, 123.0).c_star == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(min_speed_competition(1, 1, 0.5, 1).c_star ==
        doctest::Approx(2 * std::sqrt(0.5)).epsilon(1e-12));
  CHECK_THROWS_AS(min_speed_competition(1, 1, 1, 1), model_error);  // r1 == a1 k2

  // numeric cross-check on the transformed cooperative system
  Linearization transformed;
  transformed.diffusion = Eigen::Vector2d(1, 0.5);
  transformed.jacobian0 = Eigen::Matrix2d{{1 - 0.5 * 1, 0.0}, {0.7 * 1, -0.3}};
  CHECK(min_speed_numeric(transformed).c_star ==
        doctest::Approx(min_speed_competition(1, 1, 0.5, 1).c_star).epsilon(1e-8));
}

TEST_CASE("sir speed: closed form and the no-wave gate") {
  CHECK(min_speed_sir(1, 1, 0.25).c_star == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(min_speed_sir(4, 2, 1).c_star == doctest::Approx(4.0).epsilon(1e-12));
  CHECK_THROWS_AS(min_speed_sir(1, 1, 1), model_error);    // R0 = 1
  CHECK_THROWS_AS(min_speed_sir(1, 0.5, 1), model_error);  // R0 < 1
}

TEST_CASE("closed form and numeric speeds agree across random parameters") {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 8; ++rep) {
    const double d1 = 0.2 + 3 * u01(rng), d2 = 0.1 + d1 * u01(rng);
    const double r1 = 0.2 + 2 * u01(rng), r2 = r1 * u01(rng);
    const double k1 = 0.5 + u01(rng), k2 = 0.5 + u01(rng);
    double a1 = u01(rng) * 0.5, a2 = u01(rng) * 0.5;
    if (a1 * a2 * k1 * k2 >= r1 * r2) a1 = a2 = 0;
    const SpeedResult closed = min_speed_cooperative(d1, r1, d2, r2, a1, a2, k1, k2);
    Linearization lin;
    lin.diffusion = Eigen::Vector2d(d1, d2);
    lin.jacobian0 = Eigen::Vector2d(r1, r2).asDiagonal();
    CHECK(min_speed_numeric(lin).c_star == doctest::Approx(closed.c_star).epsilon(1e-6));
  }
}

TEST_CASE("scaling laws for the minimum speed") {
  std::mt19937_64 rng(123);
  for (int rep = 0; rep < 6; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 3);
    Linearization lin;
    lin.diffusion = Eigen::VectorXd(n);
    Eigen::VectorXd growth(n);
    for (int i = 0; i < n; ++i) {
      lin.diffusion[i] = 0.2 + 2 * u01(rng);
      growth[i] = 0.2 + 2 * u01(rng);
    }
    lin.jacobian0 = growth.asDiagonal();
    const double base = min_speed_numeric(lin).c_star;

    const double s = 0.3 + 2 * u01(rng);
    Linearization scaled_d = lin;
    scaled_d.diffusion *= s * s;
    CHECK(min_speed_numeric(scaled_d).c_star == doctest::Approx(s * base).epsilon(1e-6));

    Linearization scaled_f = lin;
    scaled_f.jacobian0 *= s;
    CHECK(min_speed_numeric(scaled_f).c_star == doctest::Approx(std::sqrt(s) * base).epsilon(1e-6));
  }
}

TEST_CASE("principal eigenvalue: pure neumann gives zero with a flat mode") {
  const EigenpairResult e =
      principal_eigenvalue(1.0, 0.0, HeterogeneitySpec::constant_one(), 0.0, 0, 1, 201);
  CHECK(std::abs(e.mu) <= 1e-10);
  CHECK(e.eigenfunction.maxCoeff() == doctest::Approx(1.0));
  CHECK(e.eigenfunction.minCoeff() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("principal eigenvalue: large robin coefficient hits the mixed-bc oracle") {
  const double exact = M_PI * M_PI / 4;  // cos(pi x / 2) eigenmode on [0, 1]
  const EigenpairResult e =
      principal_eigenvalue(1.0, 0.0, HeterogeneitySpec::constant_one(), 1e8, 0, 1, 1001);
  CHECK(e.mu == doctest::Approx(exact).epsilon(1e-3 / exact));
  CHECK(std::abs(e.mu - exact) <= 1e-3);
  // eigenfunction tracks the cosine shape
  for (Eigen::Index i = 0; i < e.x.size(); i += 100)
    CHECK(e.eigenfunction[i] == doctest::Approx(std::cos(M_PI * e.x[i] / 2)).epsilon(2e-3));
}

TEST_CASE("variational quotient of the eigenpair reproduces 1/mu") {
  const EigenpairResult e =
      principal_eigenvalue(1.0, 0.0, HeterogeneitySpec::constant_one(), 1e8, 0, 1, 501);
  const double q =
      variational_quotient(1.0, 0.0, HeterogeneitySpec::constant_one(), 1e8, 0, 1, e.eigenfunction);
  CHECK(q == doctest::Approx(1.0 / e.mu).epsilon(1e-8));

  // also with variable a(x) and quadratic positive h on [0, 1]
  const HeterogeneitySpec h = HeterogeneitySpec::quadratic(-1.0, 2.0);
  const EigenpairResult e2 = principal_eigenvalue(0.8, 0.4, h, 2.5, 0, 1, 401);
  const double q2 = variational_quotient(0.8, 0.4, h, 2.5, 0, 1, e2.eigenfunction);
  CHECK(q2 == doctest::Approx(1.0 / e2.mu).epsilon(1e-8));
  CHECK(e2.mu > 0);
  CHECK(e2.eigenfunction.minCoeff() > 0);
}

TEST_CASE("eigenvalue grid convergence is second order") {
  const double exact = M_PI * M_PI / 4;
  auto err = [&](Eigen::Index nx) {
    return std::abs(
        principal_eigenvalue(1.0, 0.0, HeterogeneitySpec::constant_one(), 1e8, 0, 1, nx).mu -
        exact);
  };
  CHECK(err(101) / err(201) >= 3.5);
}

TEST_CASE("sign-indefinite heterogeneity is rejected as unsupported") {
  const HeterogeneitySpec h = HeterogeneitySpec::quadratic(-1.0, 5.0);  // negative beyond x = 5
  CHECK_THROWS_AS(principal_eigenvalue(1.0, 0.0, h, 1.0, 0, 10, 101), model_error);
}

TEST_CASE("persistence threshold arithmetic") {
  CHECK(persistence_threshold(0.0, 2.0) == 0.0);
  CHECK(persistence_threshold(2.0, 4.0) == 0.5);
  CHECK_THROWS_AS(persistence_threshold(1.0, 0.0), validation_error);
}

TEST_CASE("persistence threshold separates growth from extinction") {
  const EigenpairResult e =
      principal_eigenvalue(1.0, 0.0, HeterogeneitySpec::constant_one(), 1e8, 0, 1, 201);
  const double lambda_star = persistence_threshold(e.mu, 1.0);
  CHECK(lambda_star == doctest::Approx(M_PI * M_PI / 4).epsilon(1e-3));

  auto run_sup = [&](double lambda, double t_end) {
    ScalarModel m;
    m.family = ScalarFamily::variable_diffusion_logistic;
    m.d = 1.0;
    m.b = 0.0;
    m.k = 1.0;
    m.decay = DecaySpec::constant_rate(lambda);
    m.bc = BoundaryCondition::robin(1e8);
    GridSpec grid = GridSpec::unit_aligned(0, 1, 200, 0, t_end, 0.005);
    Eigen::VectorXd xs = grid.nodes();
    Eigen::VectorXd u0(grid.nx);
    for (Eigen::Index i = 0; i < grid.nx; ++i) u0[i] = 0.5 * std::cos(M_PI * xs[i] / 2);
    const SolutionField sol = solve_scalar(m, grid, u0);
    return sol.component(0).col(sol.component(0).cols() - 1).maxCoeff();
  };
  CHECK(run_sup(1.5 * lambda_star, 40.0) >= 0.05);   // persists
  CHECK(run_sup(0.5 * lambda_star, 15.0) <= 1e-6);   // dies out
}

TEST_CASE("fisher front speed matches c* from the linearization") {
  // moderate grids keep the unit suite quick; the acceptance suite runs the
  // full-size version
  struct Case {
    double d, r;
  } cases[] = {{1.0, 1.0}, {0.5, 1.5}, {2.0, 2.0}};
  for (const auto& [d, r] : cases) {
    const SpeedResult sr = min_speed_numeric(scalar_lin(d, r));
    const double c_star = sr.c_star;
    // pulled fronts carry a ln(t)/lambda* drift; size the window so that
    // residual sits well inside the 5 percent band
    const double t_end = std::ceil(67.0 / (sr.lambda_star * c_star));
    const double span = std::ceil((c_star * t_end + 40.0) / 10.0) * 10.0;
    ScalarModel m;
    m.family = ScalarFamily::logistic;
    m.d = d;
    m.k = 1.0;
    m.decay = DecaySpec::constant_rate(r);
    GridSpec grid = GridSpec::unit_aligned(0, span, 8, 0, t_end, 0.01);
    Eigen::VectorXd xs = grid.nodes();
    Eigen::VectorXd u0(grid.nx);
    for (Eigen::Index i = 0; i < grid.nx; ++i)
      u0[i] = 0.5 * (1.0 - std::tanh(2.0 * (xs[i] - 8.0)));
    const SolutionField sol = solve_scalar(m, grid, u0);
    std::vector<double> ts, fronts;
    for (size_t s = 0; s < sol.times.size(); ++s) {
      if (sol.times[s] < t_end / 2) continue;
      const Eigen::VectorXd col = sol.component(0).col(static_cast<Eigen::Index>(s));
      for (Eigen::Index i = col.size() - 2; i >= 0; --i)
        if (col[i] >= 0.5 && col[i + 1] < 0.5) {
          const double w = (col[i] - 0.5) / (col[i] - col[i + 1]);
          ts.push_back(sol.times[s]);
          fronts.push_back(xs[i] + w * grid.dx());
          break;
        }
    }
    REQUIRE(ts.size() >= 10);
    double mt = 0, mf = 0;
    for (size_t i = 0; i < ts.size(); ++i) {
      mt += ts[i];
      mf += fronts[i];
    }
    mt /= static_cast<double>(ts.size());
    mf /= static_cast<double>(ts.size());
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < ts.size(); ++i) {
      sxx += (ts[i] - mt) * (ts[i] - mt);
      sxy += (ts[i] - mt) * (fronts[i] - mf);
    }
    CHECK(sxy / sxx == doctest::Approx(c_star).epsilon(0.05));
  }
}
