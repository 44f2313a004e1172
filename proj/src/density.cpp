#include "cpde/density.hpp"

#include <algorithm>

#include "cpde/errors.hpp"

namespace cpde {

Eigen::Index DensityField::row_of(int distance) const {
  auto it = std::find(distances.begin(), distances.end(), distance);
  return it == distances.end() ? -1 : it - distances.begin();
}

Eigen::Index DensityField::col_of(double time) const {
  auto it = std::find(times.begin(), times.end(), time);
  return it == times.end() ? -1 : it - times.begin();
}

void validate_ingested(const DensityField& field) {
  if (static_cast<Eigen::Index>(field.distances.size()) != field.values.rows() ||
      static_cast<Eigen::Index>(field.times.size()) != field.values.cols())
    throw validation_error("density field shape mismatch");
  if (!std::is_sorted(field.times.begin(), field.times.end()))
    throw validation_error("density field times not sorted");
  if (!std::is_sorted(field.distances.begin(), field.distances.end()))
    throw validation_error("density field distances not sorted");
  for (Eigen::Index r = 0; r < field.values.rows(); ++r) {
    const int x = field.distances[static_cast<size_t>(r)];
    for (Eigen::Index c = 0; c < field.values.cols(); ++c) {
      const double v = field.values(r, c);
      if (v < 0) throw validation_error("negative density cell");
      if (field.mode == DensityMode::ratio && v > 1.0)
        throw validation_error("ratio-mode density above 1");
      if (field.mode == DensityMode::count) {
        auto it = field.group_sizes.find(x);
        if (it != field.group_sizes.end() && v > static_cast<double>(it->second))
          throw validation_error("count-mode density above group size");
      }
      if (c > 0 && v < field.values(r, c - 1))
        throw validation_error("density row decreases in time (not cumulative)");
    }
  }
}

DensityField density_field(const SocialGraph& graph, const Cascade& cascade,
                           const std::vector<double>& time_grid, DensityMode mode,
                           Population population, DensityStats* stats) {
  if (time_grid.empty()) throw validation_error("density_field: empty time grid");
  if (!std::is_sorted(time_grid.begin(), time_grid.end()))
    throw validation_error("density_field: time grid must be sorted ascending");
  for (const auto& [user, t] : cascade.events) {
    (void)t;
    if (user >= graph.user_count)
      throw validation_error("cascade user " + std::to_string(user) + " not in graph");
  }

  const DistanceMap dm = hop_distances(graph, cascade.source_ids);

  // Group sizes |U_x| for x >= 1.
  std::map<int, std::int64_t> group_sizes;
  if (population == Population::reachable) {
    for (UserId u = 0; u < graph.user_count; ++u) {
      const std::int32_t d = dm[u];
      if (d >= 1) ++group_sizes[d];
    }
  } else {
    for (const auto& [user, t] : cascade.events) {
      (void)t;
      const std::int32_t d = dm[user];
      if (d >= 1) ++group_sizes[d];
    }
  }

  UserId skipped = 0;
  // adoption_counts[x][k] = adopters at distance x with time <= time_grid[k]
  std::map<int, std::vector<std::int64_t>> cumulative;
  for (const auto& [x, n] : group_sizes) {
    (void)n;
    cumulative[x].assign(time_grid.size(), 0);
  }
  for (const auto& [user, t] : cascade.events) {
    const std::int32_t d = dm[user];
    if (d < 0) {
      ++skipped;
      continue;
    }
    if (d == 0) continue;  // sources are not part of any group
    auto it = cumulative.find(d);
    if (it == cumulative.end()) continue;  // adopters population may exclude x
    auto lo = std::lower_bound(time_grid.begin(), time_grid.end(), t);
    for (size_t k = static_cast<size_t>(lo - time_grid.begin()); k < time_grid.size(); ++k)
      ++it->second[k];
  }

  DensityField f;
  f.mode = mode;
  f.times = time_grid;
  f.group_sizes = group_sizes;
  f.distances.reserve(group_sizes.size());
  for (const auto& [x, n] : group_sizes) {
    (void)n;
    f.distances.push_back(x);
  }
  f.values.resize(static_cast<Eigen::Index>(f.distances.size()),
                  static_cast<Eigen::Index>(time_grid.size()));
  for (size_t r = 0; r < f.distances.size(); ++r) {
    const int x = f.distances[r];
    const auto& row = cumulative[x];
    const double denom = mode == DensityMode::ratio ? static_cast<double>(group_sizes[x]) : 1.0;
    for (size_t c = 0; c < time_grid.size(); ++c)
      f.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          static_cast<double>(row[c]) / denom;
  }

  if (stats) {
    stats->unreachable_users = dm.unreachable_count;
    stats->skipped_adopters = skipped;
  }
  return f;
}

}  // namespace cpde
