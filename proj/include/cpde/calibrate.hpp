#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cpde/density.hpp"
#include "cpde/initial_density.hpp"
#include "cpde/models.hpp"

namespace cpde {

/// Paper accuracy of one prediction: 1 - |predicted - actual| / actual.
/// Undefined (excluded from averages) when the actual value is 0.
double accuracy(double predicted, double actual);

enum class LossKind { rmse, mean_inaccuracy };

struct FreeParameter {
  std::string name;
  double lo = 0, hi = 0;  // finite, lo < hi; positive lo selects log-space fitting
  double init = 0;
};

/// Names the scalar families expose for fitting, given the skeleton's decay
/// and heterogeneity forms.
std::vector<std::string> parameter_names(const ScalarModel& skeleton);
double get_parameter(const ScalarModel& model, const std::string& name);
void set_parameter(ScalarModel& model, const std::string& name, double value);

struct FitProblem {
  ScalarModel skeleton;  // family, forms, boundary condition, default values
  DensityField observed;
  std::vector<FreeParameter> free;
  std::map<std::string, double> fixed;  // optional explicit pins; the rest keep skeleton values
  LossKind loss = LossKind::rmse;
  int restarts = 3;
  std::uint64_t seed = 0;

  void validate() const;
};

struct AccuracyReport {
  std::vector<int> distances;
  std::vector<double> times;        // prediction columns (observed times after t0)
  Eigen::MatrixXd per_cell;         // NaN where the actual value is 0 (excluded)
  std::map<int, double> per_distance_average;
  std::map<int, int> per_distance_count;
  double overall_average = 0;
  int included_cells = 0;
};

struct FitResult {
  std::map<std::string, double> parameters;  // every model parameter, final values
  double final_loss = 0;
  double initial_loss = 0;
  int iterations = 0;
  long evaluations = 0;
  AccuracyReport report;
  ScalarModel model;  // skeleton with the fitted values applied
};

/// Derivative-free fit of the free parameters against the observed field.
/// phi comes from the observed t0 column; each objective evaluation solves
/// the model and samples it at the observed cells. Deterministic per seed.
FitResult fit(const FitProblem& problem, const GridSpec& grid);

/// Solve + sample a fully specified model at the given cells.
DensityField predict(const ScalarModel& model, const GridSpec& grid, const InitialDensity& phi,
                     const std::vector<double>& times, const std::vector<int>& distances,
                     DensityMode mode = DensityMode::ratio);

/// Synthetic observed field: solve, sample at integer distances and hourly
/// times, apply multiplicative uniform noise of the given level (seeded),
/// clamp ratio-mode cells to [0, 1].
DensityField synthesize(const ScalarModel& model, const GridSpec& grid, const InitialDensity& phi,
                        double noise_level, std::uint64_t seed,
                        DensityMode mode = DensityMode::ratio);

/// Accuracy grid of predictions vs observations over the t > t0 columns.
AccuracyReport accuracy_report(const DensityField& predicted, const DensityField& observed,
                               double t0);

}  // namespace cpde
