// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#include "mpolsr/graph.hpp"

#include <algorithm>
#include <queue>

namespace mpolsr {

SourceTree dijkstra(const TopologyGraph& graph, NodeId source) {
  if (!graph.has_node(source)) throw UnknownSource("dijkstra: source not in graph");

  SourceTree tree;
  tree.root = source;
  tree.distance[source] = Rational(0);

  // (distance, node), min-first; lazy deletion on stale entries.
  using QueueEntry = std::pair<Rational, NodeId>;
  const auto entry_greater = [](const QueueEntry& a, const QueueEntry& b) {
    if (a.first != b.first) return b.first < a.first;
    return a.second > b.second;
  };
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, decltype(entry_greater)> queue(entry_greater);
  queue.push({Rational(0), source});

  std::set<NodeId> finalized;
  while (!queue.empty()) {
    const auto [dist, node] = queue.top();
    queue.pop();
    if (finalized.count(node) != 0) continue;
    if (dist != tree.distance.at(node)) continue;  // stale
    finalized.insert(node);

    // Arcs of one tail are contiguous and head-ordered in the arc map.
    auto it = graph.arcs().lower_bound({node, 0});
    for (; it != graph.arcs().end() && it->first.first == node; ++it) {
      const NodeId head = it->first.second;
      const Rational candidate = dist + it->second;
      auto dit = tree.distance.find(head);
      if (dit == tree.distance.end() || candidate < dit->second) {
        tree.distance[head] = candidate;
        tree.predecessor[head] = node;
        queue.push({candidate, head});
      } else if (candidate == dit->second && node < tree.predecessor.at(head)) {
        // Equal-cost alternative through a smaller predecessor id. With
        // strictly positive costs the head cannot be finalized yet, so the
        // swap is always legal.
        tree.predecessor[head] = node;
      }
    }
  }
  return tree;
}

std::optional<Path> get_path(const SourceTree& tree, NodeId dest) {
  auto dit = tree.distance.find(dest);
  if (dit == tree.distance.end()) return std::nullopt;

  Path path;
  path.cost = dit->second;
  NodeId cursor = dest;
  path.hops.push_back(cursor);
  while (cursor != tree.root) {
    cursor = tree.predecessor.at(cursor);
    path.hops.push_back(cursor);
  }
  std::reverse(path.hops.begin(), path.hops.end());
  return path;
}

TopologyGraph apply_penalties(const TopologyGraph& graph, const Path& path, const CostPolicy& policy) {
  policy.validate();

  std::set<std::pair<NodeId, NodeId>> path_arcs;
  for (std::size_t i = 0; i + 1 < path.hops.size(); ++i) {
    path_arcs.insert({path.hops[i], path.hops[i + 1]});
  }
  std::set<NodeId> intermediates;
  for (std::size_t i = 1; i + 1 < path.hops.size(); ++i) intermediates.insert(path.hops[i]);

  TopologyGraph out = graph;
  for (const auto& [arc, cost] : graph.arcs()) {
    const auto [tail, head] = arc;
    if (path_arcs.count({tail, head}) != 0 || path_arcs.count({head, tail}) != 0) {
      out.set_arc_cost(tail, head, cost * policy.fp_multiplier);
    } else if (intermediates.count(head) != 0) {
      out.set_arc_cost(tail, head, cost * policy.fe_multiplier);
    }
  }
  return out;
}

std::optional<std::vector<Path>> multipath_dijkstra(NodeId source, NodeId dest, const TopologyGraph& graph,
                                                    int n_routes, const CostPolicy& policy) {
  if (n_routes < 1) throw std::invalid_argument("n_routes must be >= 1");
  if (!graph.has_node(dest)) return std::nullopt;

  std::vector<Path> routes;
  routes.reserve(static_cast<std::size_t>(n_routes));
  TopologyGraph current = graph;
  for (int i = 0; i < n_routes; ++i) {
    const SourceTree tree = dijkstra(current, source);
    auto path = get_path(tree, dest);
    if (!path) {
      // Penalties never disconnect anything, so only the first round can
      // fail to reach the destination.
      return std::nullopt;
    }
    if (i + 1 < n_routes) current = apply_penalties(current, *path, policy);
    routes.push_back(std::move(*path));
  }
  return routes;
}

}  // namespace mpolsr
