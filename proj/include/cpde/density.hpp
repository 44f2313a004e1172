#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "cpde/graph.hpp"

namespace cpde {

enum class DensityMode { ratio, count };

/// Which users count toward the group size |U_x|: every reachable user at
/// distance x, or only the ones that eventually adopt.
enum class Population { reachable, adopters };

/// Influence density over a distance grid x (rows) and time grid t (columns).
/// Observed fields are cumulative, so rows never decrease along t.
struct DensityField {
  std::vector<int> distances;      // sorted, x >= 1 for ingested cascades
  std::vector<double> times;       // sorted hours
  Eigen::MatrixXd values;          // distances.size() x times.size()
  DensityMode mode = DensityMode::ratio;
  std::map<int, std::int64_t> group_sizes;  // empty for model-generated fields

  Eigen::Index row_of(int distance) const;  // -1 when absent
  Eigen::Index col_of(double time) const;   // -1 when absent
};

/// Checks the invariants an ingested field must satisfy (range per mode,
/// cumulative rows). Model-generated fields are not required to pass this.
void validate_ingested(const DensityField& field);

struct DensityStats {
  UserId unreachable_users = 0;  // no path from any source
  UserId skipped_adopters = 0;   // adopters outside every group (unreachable)
};

/// Builds the observed density field I(x, t): for each distance x >= 1 with a
/// non-empty group and each grid time t, the number of group members adopting
/// at or before t, divided by |U_x| in ratio mode. Sources (x = 0) and
/// unreachable adopters never enter a group.
DensityField density_field(const SocialGraph& graph, const Cascade& cascade,
                           const std::vector<double>& time_grid, DensityMode mode,
                           Population population = Population::reachable,
                           DensityStats* stats = nullptr);

}  // namespace cpde
