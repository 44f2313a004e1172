#include "cpde/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cpde/errors.hpp"
#include "cpde/nelder_mead.hpp"
#include "cpde/solver.hpp"
#include "cpde/threads.hpp"

namespace cpde {

namespace {

constexpr double kDivergedLoss = 1e100;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Uniform double in [-1, 1) from raw generator bits; avoids the
/// implementation-defined std distributions for reproducibility.
double uniform_pm1(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

}  // namespace

double accuracy(double predicted, double actual) {
  if (actual == 0) return kNaN;  // excluded-cell signal
  return 1.0 - std::abs(predicted - actual) / std::abs(actual);
}

std::vector<std::string> parameter_names(const ScalarModel& skeleton) {
  std::vector<std::string> names{"d"};
  if (skeleton.family == ScalarFamily::variable_diffusion_logistic) names.push_back("b");
  if (skeleton.family != ScalarFamily::linear) names.push_back("K");
  switch (skeleton.decay.form) {
    case DecaySpec::Form::ode_decay:
      names.insert(names.end(), {"alpha", "beta", "gamma"});
      break;
    case DecaySpec::Form::offset_exp:
      names.insert(names.end(), {"A", "B", "C"});
      break;
    case DecaySpec::Form::constant:
      names.push_back("r");
      break;
  }
  if (skeleton.heterogeneity.form == HeterogeneitySpec::Form::quadratic)
    names.insert(names.end(), {"rho", "sigma"});
  if (skeleton.bc.kind == BoundaryCondition::Kind::robin) names.push_back("alpha_R");
  return names;
}

double get_parameter(const ScalarModel& m, const std::string& name) {
  if (name == "d") return m.d;
  if (name == "b") return m.b;
  if (name == "K") return m.k;
  if (name == "alpha") return m.decay.alpha;
  if (name == "beta") return m.decay.beta;
  if (name == "gamma") return m.decay.gamma;
  if (name == "A") return m.decay.a;
  if (name == "B") return m.decay.b;
  if (name == "C") return m.decay.c;
  if (name == "r") return m.decay.r;
  if (name == "rho") return m.heterogeneity.rho;
  if (name == "sigma") return m.heterogeneity.sigma;
  if (name == "alpha_R") return m.bc.robin_alpha;
  throw validation_error("unknown model parameter '" + name + "'");
}

void set_parameter(ScalarModel& m, const std::string& name, double value) {
  if (name == "d") m.d = value;
  else if (name == "b") m.b = value;
  else if (name == "K") m.k = value;
  else if (name == "alpha") m.decay.alpha = value;
  else if (name == "beta") m.decay.beta = value;
  else if (name == "gamma") m.decay.gamma = value;
  else if (name == "A") m.decay.a = value;
  else if (name == "B") m.decay.b = value;
  else if (name == "C") m.decay.c = value;
  else if (name == "r") m.decay.r = value;
  else if (name == "rho") m.heterogeneity.rho = value;
  else if (name == "sigma") m.heterogeneity.sigma = value;
  else if (name == "alpha_R") m.bc.robin_alpha = value;
  else throw validation_error("unknown model parameter '" + name + "'");
}

void FitProblem::validate() const {
  const auto names = parameter_names(skeleton);
  auto known = [&](const std::string& n) {
    return std::find(names.begin(), names.end(), n) != names.end();
  };
  for (const auto& fp : free) {
    if (!known(fp.name)) throw validation_error("free parameter '" + fp.name + "' not in family");
    if (!std::isfinite(fp.lo) || !std::isfinite(fp.hi) || !(fp.lo < fp.hi))
      throw validation_error("free parameter '" + fp.name + "' needs finite bounds with lo < hi");
    if (fp.init < fp.lo || fp.init > fp.hi)
      throw validation_error("initial guess for '" + fp.name + "' outside its bounds");
    if (fixed.count(fp.name))
      throw validation_error("parameter '" + fp.name + "' is both free and fixed");
    const long dupes = std::count_if(free.begin(), free.end(),
                                     [&](const FreeParameter& o) { return o.name == fp.name; });
    if (dupes > 1) throw validation_error("parameter '" + fp.name + "' listed twice");
  }
  for (const auto& [n, v] : fixed) {
    (void)v;
    if (!known(n)) throw validation_error("fixed parameter '" + n + "' not in family");
  }
  if (observed.distances.size() < 2) throw validation_error("observed field needs >= 2 distances");
  if (observed.times.size() < 3) throw validation_error("observed field needs >= 3 times");
  if (restarts < 1) throw validation_error("restarts must be >= 1");
}

AccuracyReport accuracy_report(const DensityField& predicted, const DensityField& observed,
                               double t0) {
  AccuracyReport rep;
  rep.distances = observed.distances;
  for (double t : observed.times)
    if (t > t0 + 1e-9) rep.times.push_back(t);
  rep.per_cell.resize(static_cast<Eigen::Index>(rep.distances.size()),
                      static_cast<Eigen::Index>(rep.times.size()));
  double total = 0;
  for (size_t r = 0; r < rep.distances.size(); ++r) {
    double row_sum = 0;
    int row_count = 0;
    for (size_t c = 0; c < rep.times.size(); ++c) {
      const Eigen::Index oc = observed.col_of(rep.times[c]);
      const Eigen::Index pr = predicted.row_of(rep.distances[r]);
      const Eigen::Index pc = predicted.col_of(rep.times[c]);
      if (pr < 0 || pc < 0) throw validation_error("prediction missing an observed cell");
      const double a = accuracy(predicted.values(pr, pc),
                                observed.values(static_cast<Eigen::Index>(r), oc));
      rep.per_cell(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a;
      if (!std::isnan(a)) {
        row_sum += a;
        ++row_count;
      }
    }
    if (row_count > 0) rep.per_distance_average[rep.distances[r]] = row_sum / row_count;
    rep.per_distance_count[rep.distances[r]] = row_count;
    total += row_sum;
    rep.included_cells += row_count;
  }
  rep.overall_average = rep.included_cells > 0 ? total / rep.included_cells : kNaN;
  return rep;
}

DensityField predict(const ScalarModel& model, const GridSpec& grid, const InitialDensity& phi,
                     const std::vector<double>& times, const std::vector<int>& distances,
                     DensityMode mode) {
  const SolutionField sol = solve_scalar(model, grid, phi);
  return sample_at_distances(sol, distances, times, 0, mode).field;
}

DensityField synthesize(const ScalarModel& model, const GridSpec& grid, const InitialDensity& phi,
                        double noise_level, std::uint64_t seed, DensityMode mode) {
  if (noise_level < 0) throw validation_error("noise level must be >= 0");
  std::vector<int> distances;
  for (int x = static_cast<int>(std::ceil(grid.l - 1e-9)); x <= static_cast<int>(std::floor(grid.L + 1e-9)); ++x)
    distances.push_back(x);
  std::vector<double> times;
  for (double t = grid.t0; t <= grid.t_end + 1e-9; t += 1.0) times.push_back(std::min(t, grid.t_end));
  DensityField field = predict(model, grid, phi, times, distances, mode);
  if (noise_level > 0) {
    std::mt19937_64 rng(seed);
    for (Eigen::Index r = 0; r < field.values.rows(); ++r)
      for (Eigen::Index c = 0; c < field.values.cols(); ++c)
        field.values(r, c) *= 1.0 + noise_level * uniform_pm1(rng);
  }
  for (Eigen::Index r = 0; r < field.values.rows(); ++r)
    for (Eigen::Index c = 0; c < field.values.cols(); ++c) {
      double& v = field.values(r, c);
      v = std::max(v, 0.0);
      if (mode == DensityMode::ratio) v = std::min(v, 1.0);
    }
  return field;
}

namespace {

struct Transform {
  bool log_space = false;
  double lo = 0, hi = 0;  // transformed bounds

  double forward(double p) const { return log_space ? std::log(p) : p; }
  double inverse(double t) const { return log_space ? std::exp(t) : t; }
};

struct Objective {
  const FitProblem& problem;
  const GridSpec& grid;
  ScalarModel base;  // skeleton with fixed values applied
  InitialDensity phi;
  std::vector<Transform> transforms;
  double penalty_scale = 1.0;

  double loss_of(const ScalarModel& model) const {
    SolutionField sol;
    try {
      sol = solve_scalar(model, grid, phi);
    } catch (const divergence_error&) {
      return kDivergedLoss;
    }
    const DensityField pred =
        sample_at_distances(sol, problem.observed.distances, problem.observed.times, 0,
                            problem.observed.mode)
            .field;
    if (problem.loss == LossKind::rmse) {
      const double n = static_cast<double>(pred.values.size());
      return std::sqrt((pred.values - problem.observed.values).squaredNorm() / n);
    }
    double total = 0;
    long count = 0;
    for (Eigen::Index r = 0; r < pred.values.rows(); ++r)
      for (Eigen::Index c = 0; c < pred.values.cols(); ++c) {
        const double actual = problem.observed.values(r, c);
        if (actual == 0) continue;
        total += std::abs(pred.values(r, c) - actual) / std::abs(actual);
        ++count;
      }
    if (count == 0)
      throw validation_error("mean-inaccuracy loss undefined: every observed cell is zero");
    return total / static_cast<double>(count);
  }

  double operator()(const Eigen::VectorXd& theta) const {
    ScalarModel model = base;
    double penalty = 0;
    for (size_t i = 0; i < problem.free.size(); ++i) {
      const Transform& tr = transforms[i];
      const double clamped = std::clamp(theta[static_cast<Eigen::Index>(i)], tr.lo, tr.hi);
      const double excess =
          (theta[static_cast<Eigen::Index>(i)] - clamped) / std::max(tr.hi - tr.lo, 1e-300);
      penalty += excess * excess;
      set_parameter(model, problem.free[i].name, tr.inverse(clamped));
    }
    try {
      model.validate();
    } catch (const validation_error&) {
      return kDivergedLoss;
    }
    return loss_of(model) + penalty_scale * penalty;
  }
};

}  // namespace

FitResult fit(const FitProblem& problem, const GridSpec& grid) {
  problem.validate();
  grid.validate();

  Eigen::Index t0_col = -1;
  for (size_t c = 0; c < problem.observed.times.size(); ++c)
    if (std::abs(problem.observed.times[c] - grid.t0) <= 1e-9)
      t0_col = static_cast<Eigen::Index>(c);
  if (t0_col < 0)
    throw validation_error("observed field lacks the t = t0 column needed to build phi");
  if (problem.observed.times.back() > grid.t_end + 1e-9)
    throw validation_error("grid t_end does not cover the observed times");

  std::vector<std::pair<double, double>> samples;
  for (size_t r = 0; r < problem.observed.distances.size(); ++r)
    samples.emplace_back(problem.observed.distances[r],
                         problem.observed.values(static_cast<Eigen::Index>(r), t0_col));
  // phi spans [l, L]; extend flat to the interval ends if the samples stop short
  if (samples.front().first > grid.l + 1e-9)
    samples.insert(samples.begin(), {grid.l, samples.front().second});
  if (samples.back().first < grid.L - 1e-9) samples.emplace_back(grid.L, samples.back().second);

  Objective obj{problem, grid, problem.skeleton, build_initial_density(samples), {}, 1.0};
  for (const auto& [name, value] : problem.fixed) set_parameter(obj.base, name, value);
  for (const auto& fp : problem.free) {
    Transform tr;
    tr.log_space = fp.lo > 0;
    tr.lo = tr.forward(fp.lo);
    tr.hi = tr.forward(fp.hi);
    obj.transforms.push_back(tr);
  }

  const Eigen::Index n = static_cast<Eigen::Index>(problem.free.size());
  FitResult result;
  result.model = obj.base;

  if (n == 0) {  // report-only mode
    result.final_loss = result.initial_loss = obj.loss_of(obj.base);
    result.evaluations = 1;
  } else {
    Eigen::VectorXd start(n), steps(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Transform& tr = obj.transforms[static_cast<size_t>(i)];
      start[i] = tr.forward(problem.free[static_cast<size_t>(i)].init);
      steps[i] = 0.08 * (tr.hi - tr.lo);
    }
    const double f0 = obj(start);
    if (!std::isfinite(f0)) throw fit_error("loss is not finite at the initial guess");
    obj.penalty_scale = 100.0 * (1.0 + std::abs(std::min(f0, 1e6)));
    result.initial_loss = f0;

    std::vector<SimplexResult<double>> runs(static_cast<size_t>(problem.restarts));
    auto run_one = [&](int r) {
      Eigen::VectorXd s = start;
      if (r > 0) {
        std::mt19937_64 rng(problem.seed + static_cast<std::uint64_t>(r) * 0x9e3779b97f4a7c15ULL);
        for (Eigen::Index i = 0; i < n; ++i) {
          const Transform& tr = obj.transforms[static_cast<size_t>(i)];
          s[i] = std::clamp(s[i] + 0.15 * (tr.hi - tr.lo) * uniform_pm1(rng), tr.lo, tr.hi);
        }
      }
      runs[static_cast<size_t>(r)] = nelder_mead<double>(obj, s, steps, 1e-12, 800 * static_cast<int>(n));
    };
    parallel_for(problem.restarts, run_one);

    size_t best = 0;
    for (size_t r = 1; r < runs.size(); ++r)
      if (runs[r].value < runs[best].value) best = r;
    if (runs[best].value >= kDivergedLoss)
      throw fit_error("every objective evaluation diverged; the fit is infeasible");

    for (size_t i = 0; i < problem.free.size(); ++i) {
      const Transform& tr = obj.transforms[i];
      const double v = tr.inverse(std::clamp(runs[best].x[static_cast<Eigen::Index>(i)], tr.lo, tr.hi));
      set_parameter(result.model, problem.free[i].name, v);
    }
    result.final_loss = obj.loss_of(result.model);
    for (const auto& run : runs) {
      result.iterations += run.iterations;
      result.evaluations += run.evaluations;
    }
  }

  for (const auto& name : parameter_names(problem.skeleton))
    result.parameters[name] = get_parameter(result.model, name);

  const DensityField pred = predict(result.model, grid, obj.phi, problem.observed.times,
                                    problem.observed.distances, problem.observed.mode);
  result.report = accuracy_report(pred, problem.observed, grid.t0);
  return result;
}

}  // namespace cpde
