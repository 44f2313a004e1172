#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cpde/density.hpp"
#include "cpde/graph.hpp"
#include "cpde/models.hpp"

namespace cpde {

/// Graph file: header `follower,followee`, one directed edge per line.
std::vector<std::pair<UserId, UserId>> read_graph_csv(const std::string& path);

/// Cascade file: header `user_id,time_hours`.
std::vector<std::pair<UserId, double>> read_cascade_csv(const std::string& path);

/// Sources file: one user id per line.
std::set<UserId> read_sources_file(const std::string& path);

/// Density layout: `distance,<t1>,...,<tn>[,group_size]`, one row per
/// distance. The group_size sidecar column is written when the field carries
/// group sizes and accepted either way on read. Numbers use the shortest
/// round-trip representation, so identical fields give identical bytes.
void write_density_csv(const std::string& path, const DensityField& field);
DensityField read_density_csv(const std::string& path);

/// Solver export: `x,<t1>,...,<tn>`, one row per grid node, one file per
/// component.
void write_solution_csv(const std::string& path, const SolutionField& field, int component);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace cpde
