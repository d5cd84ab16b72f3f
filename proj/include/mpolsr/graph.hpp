// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mpolsr/rational.hpp"

namespace mpolsr {

/// Node identifiers are totally ordered; the order is what makes every
/// shortest-path tie-break deterministic.
using NodeId = std::uint32_t;

struct UnknownSource : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Weighted directed graph over node identifiers. An undirected link is
/// stored as two arcs so the two directions can diverge under penalization.
/// Costs are strictly positive; self-loops are rejected.
class TopologyGraph {
 public:
  using ArcMap = std::map<std::pair<NodeId, NodeId>, Rational>;

  void add_node(NodeId id) { nodes_.insert(id); }

  void add_arc(NodeId tail, NodeId head, const Rational& cost) {
    if (tail == head) throw std::invalid_argument("self-loop arc");
    if (cost <= Rational(0)) throw std::invalid_argument("arc cost must be positive");
    nodes_.insert(tail);
    nodes_.insert(head);
    arcs_.emplace(std::make_pair(tail, head), cost);  // keeps the first cost on duplicates
  }

  /// Adds both directions with the same cost.
  void add_link(NodeId a, NodeId b, const Rational& cost = Rational(1)) {
    add_arc(a, b, cost);
    add_arc(b, a, cost);
  }

  void remove_arcs_between(NodeId a, NodeId b) {
    arcs_.erase({a, b});
    arcs_.erase({b, a});
  }

  [[nodiscard]] bool has_node(NodeId id) const { return nodes_.count(id) != 0; }
  [[nodiscard]] bool has_arc(NodeId tail, NodeId head) const { return arcs_.count({tail, head}) != 0; }
  [[nodiscard]] std::optional<Rational> arc_cost(NodeId tail, NodeId head) const {
    auto it = arcs_.find({tail, head});
    if (it == arcs_.end()) return std::nullopt;
    return it->second;
  }

  [[nodiscard]] const std::set<NodeId>& nodes() const { return nodes_; }
  [[nodiscard]] const ArcMap& arcs() const { return arcs_; }

  void set_arc_cost(NodeId tail, NodeId head, const Rational& cost) { arcs_.at({tail, head}) = cost; }

  friend bool operator==(const TopologyGraph& a, const TopologyGraph& b) {
    return a.nodes_ == b.nodes_ && a.arcs_ == b.arcs_;
  }

 private:
  std::set<NodeId> nodes_;
  ArcMap arcs_;
};

/// Shortest-path tree rooted at `root`. Nodes absent from `distance` are
/// unreachable. `predecessor` has no entry for the root.
struct SourceTree {
  NodeId root = 0;
  std::map<NodeId, NodeId> predecessor;
  std::map<NodeId, Rational> distance;
};

/// Simple path from source to destination with its cost under the graph it
/// was computed in.
struct Path {
  std::vector<NodeId> hops;
  Rational cost;

  friend bool operator==(const Path& a, const Path& b) { return a.hops == b.hops && a.cost == b.cost; }
};

/// Incremental cost functions: fp scales arcs that lie on (or reverse) a
/// previously found path, fe scales arcs that point at its intermediate
/// vertices. Multipliers below one would let costs shrink, so they are
/// rejected up front.
struct CostPolicy {
  Rational fp_multiplier{2};
  Rational fe_multiplier{2};

  void validate() const {
    if (fp_multiplier < Rational(1) || fe_multiplier < Rational(1))
      throw std::invalid_argument("cost multipliers must be >= 1");
  }
};

/// Standard Dijkstra from `source`. Determinism contract: among equal-cost
/// alternatives a node's predecessor is the smallest NodeId, and extraction
/// ties resolve toward the smallest NodeId.
SourceTree dijkstra(const TopologyGraph& graph, NodeId source);

/// Reads the root->dest hop list off the predecessor links. Empty when the
/// destination was not reached.
std::optional<Path> get_path(const SourceTree& tree, NodeId dest);

/// Returns a penalized copy of the graph: arcs on the path (either
/// direction) take the fp multiplier; remaining arcs whose head is an
/// intermediate path vertex (endpoints excluded) take fe.
TopologyGraph apply_penalties(const TopologyGraph& graph, const Path& path, const CostPolicy& policy);

/// Iterated penalized Dijkstra: P1 is the plain shortest path, and each
/// subsequent route is the shortest path of the graph penalized by all the
/// routes found before it. Always yields `n_routes` paths (repeats allowed)
/// once the destination is reachable at all; std::nullopt otherwise.
std::optional<std::vector<Path>> multipath_dijkstra(NodeId source, NodeId dest, const TopologyGraph& graph,
                                                    int n_routes, const CostPolicy& policy);

}  // namespace mpolsr
