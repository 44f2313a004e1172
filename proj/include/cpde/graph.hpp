#pragma once

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

namespace cpde {

using UserId = std::int64_t;

/// Directed follower graph. An edge (follower, followee) means the follower
/// sees the followee's posts, so content flows followee -> follower.
struct SocialGraph {
  UserId user_count = 0;
  /// Deduplicated, sorted (follower, followee) pairs, no self loops.
  std::vector<std::pair<UserId, UserId>> edges;
  /// spread_adj[v] lists the followers of v: the users one hop downstream
  /// of v along the content-flow direction.
  std::vector<std::vector<UserId>> spread_adj;
};

/// Builds a graph from raw (follower, followee) records. Duplicates collapse,
/// user_count is at least max id + 1 (or the explicit count if larger).
SocialGraph load_graph(const std::vector<std::pair<UserId, UserId>>& edge_records,
                       UserId explicit_user_count = 0);

/// One adoption event per user, earliest-first semantics.
struct Cascade {
  std::set<UserId> source_ids;
  /// (user, hours since submission), sorted by time then user, one entry per user.
  std::vector<std::pair<UserId, double>> events;
};

/// Normalizes and validates raw events: sorts, keeps each user's earliest
/// adoption, requires every source to have an event at time 0.
Cascade make_cascade(const std::set<UserId>& sources,
                     std::vector<std::pair<UserId, double>> raw_events);

/// Hop counts from the nearest source along content flow. dist[u] == -1 marks
/// users with no path from any source.
struct DistanceMap {
  std::vector<std::int32_t> dist;
  UserId unreachable_count = 0;

  bool reachable(UserId u) const { return dist[static_cast<size_t>(u)] >= 0; }
  std::int32_t operator[](UserId u) const { return dist[static_cast<size_t>(u)]; }
  std::int32_t max_distance() const;
};

/// Multi-source BFS over the content-flow direction (followee to follower).
DistanceMap hop_distances(const SocialGraph& graph, const std::set<UserId>& sources);

/// Jaccard-style interest distance 1 - |A n B| / |A u B| in [0, 1].
double interest_distance(const std::set<UserId>& contents_a, const std::set<UserId>& contents_b);

}  // namespace cpde
