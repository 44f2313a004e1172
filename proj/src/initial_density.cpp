#include "cpde/initial_density.hpp"

#include "cpde/errors.hpp"

namespace cpde {

InitialDensity build_initial_density(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 2) throw validation_error("initial density needs at least 2 samples");
  Eigen::VectorXd x(samples.size()), y(samples.size());
  bool any_positive = false;
  for (size_t i = 0; i < samples.size(); ++i) {
    x[static_cast<Eigen::Index>(i)] = samples[i].first;
    y[static_cast<Eigen::Index>(i)] = samples[i].second;
    if (samples[i].second < 0) throw validation_error("initial density sample below zero");
    if (samples[i].second > 0) any_positive = true;
  }
  if (!any_positive) throw validation_error("initial density is identically zero");
  if (samples.size() < 4) return InitialDensity(monotone_spline(x, y), true);
  return InitialDensity(clamped_spline(x, y), false);
}

}  // namespace cpde
