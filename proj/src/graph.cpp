#include "cpde/graph.hpp"

#include <algorithm>
#include <deque>

#include "cpde/errors.hpp"

namespace cpde {

SocialGraph load_graph(const std::vector<std::pair<UserId, UserId>>& edge_records,
                       UserId explicit_user_count) {
  SocialGraph g;
  g.edges.reserve(edge_records.size());
  UserId max_id = -1;
  for (const auto& [follower, followee] : edge_records) {
    if (follower < 0 || followee < 0) throw validation_error("negative user id in edge record");
    if (follower == followee)
      throw validation_error("self-loop edge for user " + std::to_string(follower));
    g.edges.emplace_back(follower, followee);
    max_id = std::max({max_id, follower, followee});
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  g.user_count = std::max(max_id + 1, explicit_user_count);
  g.spread_adj.assign(static_cast<size_t>(g.user_count), {});
  for (const auto& [follower, followee] : g.edges)
    g.spread_adj[static_cast<size_t>(followee)].push_back(follower);
  return g;
}

Cascade make_cascade(const std::set<UserId>& sources,
                     std::vector<std::pair<UserId, double>> raw_events) {
  if (sources.empty()) throw validation_error("cascade needs at least one source");
  for (const auto& [user, t] : raw_events) {
    if (user < 0) throw validation_error("negative user id in cascade event");
    if (t < 0) throw validation_error("negative adoption time for user " + std::to_string(user));
  }
  // Earliest adoption wins; ties broken by user id for a deterministic order.
  std::stable_sort(raw_events.begin(), raw_events.end(),
                   [](const auto& a, const auto& b) {
                     return a.second != b.second ? a.second < b.second : a.first < b.first;
                   });
  Cascade c;
  c.source_ids = sources;
  std::set<UserId> seen;
  for (const auto& ev : raw_events)
    if (seen.insert(ev.first).second) c.events.push_back(ev);
  for (UserId s : sources) {
    bool at_zero = false;
    for (const auto& [user, t] : c.events)
      if (user == s && t == 0) { at_zero = true; break; }
    if (!at_zero)
      throw validation_error("source " + std::to_string(s) + " has no adoption event at time 0");
  }
  return c;
}

std::int32_t DistanceMap::max_distance() const {
  std::int32_t m = 0;
  for (std::int32_t d : dist) m = std::max(m, d);
  return m;
}

DistanceMap hop_distances(const SocialGraph& graph, const std::set<UserId>& sources) {
  if (sources.empty()) throw validation_error("hop_distances: empty source set");
  DistanceMap dm;
  dm.dist.assign(static_cast<size_t>(graph.user_count), -1);
  std::deque<UserId> frontier;
  for (UserId s : sources) {
    if (s < 0 || s >= graph.user_count)
      throw validation_error("unknown source id " + std::to_string(s));
    dm.dist[static_cast<size_t>(s)] = 0;
    frontier.push_back(s);
  }
  while (!frontier.empty()) {
    const UserId v = frontier.front();
    frontier.pop_front();
    const std::int32_t next = dm.dist[static_cast<size_t>(v)] + 1;
    for (UserId u : graph.spread_adj[static_cast<size_t>(v)]) {
      auto& du = dm.dist[static_cast<size_t>(u)];
      if (du < 0) {
        du = next;
        frontier.push_back(u);
      }
    }
  }
  for (std::int32_t d : dm.dist)
    if (d < 0) ++dm.unreachable_count;
  return dm;
}

double interest_distance(const std::set<UserId>& contents_a, const std::set<UserId>& contents_b) {
  if (contents_a.empty() && contents_b.empty())
    throw validation_error("interest distance undefined for two empty content sets");
  std::vector<UserId> inter, uni;
  std::set_intersection(contents_a.begin(), contents_a.end(), contents_b.begin(), contents_b.end(),
                        std::back_inserter(inter));
  std::set_union(contents_a.begin(), contents_a.end(), contents_b.begin(), contents_b.end(),
                 std::back_inserter(uni));
  return 1.0 - static_cast<double>(inter.size()) / static_cast<double>(uni.size());
}

}  // namespace cpde
