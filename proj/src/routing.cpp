// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#include "mpolsr/routing.hpp"

#include <algorithm>

namespace mpolsr {

const char* drop_reason_name(DropReason reason) {
  switch (reason) {
    case DropReason::no_route: return "no_route";
    case DropReason::ttl_exceeded: return "ttl_exceeded";
    case DropReason::recovery_limit: return "recovery_limit";
    case DropReason::link: return "link";
    case DropReason::sim_end: return "sim_end";
    case DropReason::mdc_undecoded: return "mdc_undecoded";
  }
  return "unknown";
}

std::optional<Path> route_recovery(const ProtocolState& state, NodeId dest, NodeId failed_next_hop, SimTime now) {
  TopologyGraph graph = state.build_topology_graph(now);
  graph.remove_arcs_between(state.self_id(), failed_next_hop);
  if (!graph.has_node(dest)) return std::nullopt;
  return get_path(dijkstra(graph, state.self_id()), dest);
}

ForwardDecision forward(const ProtocolState& state, const DataPacket& packet, SimTime now,
                        std::uint32_t recovery_cap, bool recovery_enabled) {
  if (!packet.header) throw MisroutedPacket("source-routed forward on packet without route header");
  const SourceRouteHeader& header = *packet.header;
  if (header.cursor >= header.route.size() || header.route[header.cursor] != state.self_id())
    throw MisroutedPacket("packet cursor does not point at this node");

  if (header.cursor + 1 == header.route.size()) return ForwardDecision::deliver();
  if (packet.ttl <= 0) return ForwardDecision::drop(DropReason::ttl_exceeded);

  const NodeId next = header.route[header.cursor + 1];
  if (!recovery_enabled) return ForwardDecision::forward(next);
  if (state.is_symmetric_neighbor(next, now)) return ForwardDecision::forward(next);

  if (header.recovery_count >= recovery_cap) return ForwardDecision::drop(DropReason::recovery_limit);
  const NodeId dest = header.route.back();
  auto repaired = route_recovery(state, dest, next, now);
  if (!repaired || repaired->hops.size() < 2) return ForwardDecision::drop(DropReason::no_route);

  ForwardDecision decision;
  decision.kind = ForwardDecision::Kind::recovered;
  decision.next_hop = repaired->hops[1];
  decision.new_route.assign(header.route.begin(), header.route.begin() + static_cast<std::ptrdiff_t>(header.cursor));
  decision.new_route.insert(decision.new_route.end(), repaired->hops.begin(), repaired->hops.end());
  return decision;
}

const Path& allocate_route(std::uint64_t sequence, const std::vector<Path>& routes) {
  if (routes.empty()) throw std::invalid_argument("allocate_route on empty route list");
  return routes[sequence % routes.size()];
}

const std::vector<Path>* RouteCache::routes(const ProtocolState& state, NodeId dest, SimTime now) {
  auto it = entries_.find(dest);
  if (it != entries_.end() && it->second.revision == state.revision())
    return it->second.reachable ? &it->second.routes : nullptr;

  ++computations_;
  Entry entry;
  entry.revision = state.revision();
  auto result = multipath_dijkstra(state.self_id(), dest, state.build_topology_graph(now), n_routes_, policy_);
  if (result) {
    entry.reachable = true;
    entry.routes = std::move(*result);
  }
  auto [pos, inserted] = entries_.insert_or_assign(dest, std::move(entry));
  (void)inserted;
  return pos->second.reachable ? &pos->second.routes : nullptr;
}

std::optional<NodeId> RoutingTable::next_hop(const ProtocolState& state, NodeId dest, SimTime now) {
  if (!valid_ || revision_ != state.revision()) {
    ++computations_;
    next_hop_.clear();
    const SourceTree tree = dijkstra(state.build_topology_graph(now), state.self_id());
    for (const auto& [node, dist] : tree.distance) {
      if (node == state.self_id()) continue;
      NodeId hop = node;
      while (tree.predecessor.at(hop) != state.self_id()) hop = tree.predecessor.at(hop);
      next_hop_[node] = hop;
    }
    revision_ = state.revision();
    valid_ = true;
  }
  auto it = next_hop_.find(dest);
  if (it == next_hop_.end()) return std::nullopt;
  return it->second;
}

}  // namespace mpolsr
