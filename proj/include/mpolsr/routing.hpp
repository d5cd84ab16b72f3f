// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mpolsr/graph.hpp"
#include "mpolsr/olsr_state.hpp"

namespace mpolsr {

struct MisroutedPacket : std::logic_error {
  using std::logic_error::logic_error;
};

/// Hop list carried in data packets plus the position of the node currently
/// holding the packet. Recovery splices a fresh suffix in from the cursor,
/// so hops before the cursor are history and may repeat nodes of the new
/// suffix; the suffix itself is always simple.
struct SourceRouteHeader {
  std::vector<NodeId> route;
  std::size_t cursor = 0;
  std::uint32_t recovery_count = 0;
};

struct MdcTag {
  std::uint64_t group_id = 0;
  std::uint32_t description_index = 0;
};

enum class DropReason : std::uint8_t { no_route, ttl_exceeded, recovery_limit, link, sim_end, mdc_undecoded };

const char* drop_reason_name(DropReason reason);

struct DataPacket {
  std::uint32_t flow_id = 0;
  std::uint64_t sequence = 0;
  NodeId src = 0;
  NodeId dst = 0;
  std::size_t payload_size = 0;
  std::optional<SourceRouteHeader> header;  // absent for unipath variants
  std::optional<MdcTag> mdc_tag;
  SimTime created_at;
  int ttl = 0;
};

/// Exactly one of the four outcomes of handling a data packet at a node.
struct ForwardDecision {
  enum class Kind : std::uint8_t { deliver, forward_to, recovered, drop };
  Kind kind = Kind::drop;
  NodeId next_hop = 0;             // forward_to, recovered
  std::vector<NodeId> new_route;   // recovered: full spliced route
  DropReason reason = DropReason::no_route;  // drop

  static ForwardDecision deliver() { return {Kind::deliver, 0, {}, DropReason::no_route}; }
  static ForwardDecision forward(NodeId next) { return {Kind::forward_to, next, {}, DropReason::no_route}; }
  static ForwardDecision drop(DropReason why) { return {Kind::drop, 0, {}, why}; }
};

/// Single shortest path from this node to `dest` over the local topology
/// knowledge, with the arcs to the failed next hop removed first.
std::optional<Path> route_recovery(const ProtocolState& state, NodeId dest, NodeId failed_next_hop, SimTime now);

/// Source-route forwarding with optional local repair. With
/// `recovery_enabled` false the next hop is used blindly (pure source
/// routing); the radio model then decides whether it still works.
ForwardDecision forward(const ProtocolState& state, const DataPacket& packet, SimTime now,
                        std::uint32_t recovery_cap, bool recovery_enabled);

/// Round-robin packet-to-route allocation.
const Path& allocate_route(std::uint64_t sequence, const std::vector<Path>& routes);

/// Multipath routes from `state`'s topology knowledge, cached per
/// destination and recomputed whenever the protocol state's revision moves
/// (any neighbor/2-hop/topology change or expiry).
class RouteCache {
 public:
  RouteCache(int n_routes, CostPolicy policy) : n_routes_(n_routes), policy_(policy) {}

  const std::vector<Path>* routes(const ProtocolState& state, NodeId dest, SimTime now);

  [[nodiscard]] std::uint64_t computations() const { return computations_; }

 private:
  struct Entry {
    std::uint64_t revision = 0;
    bool reachable = false;
    std::vector<Path> routes;
  };
  int n_routes_;
  CostPolicy policy_;
  std::map<NodeId, Entry> entries_;
  std::uint64_t computations_ = 0;
};

/// Hop-by-hop routing table for the unipath baselines, lazily rebuilt from
/// plain Dijkstra whenever the protocol state changes. The two baseline
/// flavors differ only in *when* the state changes (periodic HELLO loss vs
/// immediate link-layer feedback), not in the lookup.
class RoutingTable {
 public:
  std::optional<NodeId> next_hop(const ProtocolState& state, NodeId dest, SimTime now);

  [[nodiscard]] std::uint64_t computations() const { return computations_; }

 private:
  std::uint64_t revision_ = 0;
  bool valid_ = false;
  std::map<NodeId, NodeId> next_hop_;
  std::uint64_t computations_ = 0;
};

}  // namespace mpolsr
