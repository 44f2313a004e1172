#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "cpde/density.hpp"
#include "cpde/initial_density.hpp"
#include "cpde/models.hpp"
#include "cpde/tridiag.hpp"

namespace cpde {

/// Conservative discretization of (a(x) u_x)_x on the grid nodes, with the
/// half-node diffusivity form. Left end is always no-flux; the right end is
/// no-flux or Robin via a mirrored ghost node, keeping second order.
Tridiag<double> diffusion_operator(const GridSpec& grid, const std::function<double(double)>& a,
                                   const BoundaryCondition& bc);

/// Trapezoid quadrature of nodal values (the discrete mass the scheme
/// conserves exactly in reaction-free Neumann runs).
double trapezoid_mass(const GridSpec& grid, const Eigen::VectorXd& u);

SolutionField solve_scalar(const ScalarModel& model, const GridSpec& grid,
                           const Eigen::VectorXd& init_values);
SolutionField solve_scalar(const ScalarModel& model, const GridSpec& grid,
                           const InitialDensity& phi);

SolutionField solve_system(const SystemModel& model, const GridSpec& grid,
                           const std::vector<Eigen::VectorXd>& init_values);
SolutionField solve_system(const SystemModel& model, const GridSpec& grid,
                           const std::vector<InitialDensity>& inits);

struct SampledField {
  DensityField field;
  bool off_grid_interpolated = false;
};

/// Reads the solution at the requested integer distances and times. Distances
/// on grid nodes are exact reads; times between snapshots interpolate
/// linearly; off-node distances interpolate in x and raise the warning flag.
SampledField sample_at_distances(const SolutionField& field, const std::vector<int>& distances,
                                 const std::vector<double>& times, int component = 0,
                                 DensityMode mode = DensityMode::count);

}  // namespace cpde
