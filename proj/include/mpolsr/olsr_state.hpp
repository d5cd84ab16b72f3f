// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "mpolsr/graph.hpp"
#include "mpolsr/rational.hpp"

namespace mpolsr {

enum class LinkStatus : std::uint8_t { asymmetric, symmetric, mpr };

/// One-hop neighborhood advertisement. The originator never lists itself.
struct HelloMessage {
  NodeId originator = 0;
  std::vector<std::pair<NodeId, LinkStatus>> listed_neighbors;
  SimTime validity;
};

/// Network-wide advertisement of the originator's MPR selectors, flooded
/// through the MPR relay set.
struct TcMessage {
  NodeId originator = 0;
  std::vector<NodeId> advertised;
  std::uint32_t sequence = 0;
  SimTime validity;
};

struct NeighborEntry {
  LinkStatus status = LinkStatus::asymmetric;  // asymmetric or symmetric; mpr is HELLO-only
  SimTime expiry;
};

struct TopologyInfo {
  std::uint32_t sequence = 0;
  SimTime expiry;
};

/// Greedy MPR cover: neighbors that are the only way to some strict 2-hop
/// node come first, then whichever symmetric neighbor covers the most
/// still-uncovered 2-hop nodes (ties to the smallest id). 2-hop nodes that
/// no symmetric neighbor reaches are skipped.
std::set<NodeId> select_mprs(const std::set<NodeId>& symmetric_neighbors,
                             const std::vector<std::pair<NodeId, NodeId>>& two_hop_links, NodeId self);

/// Per-node OLSR information bases: neighbor set, 2-hop set, MPR and MPR
/// selector sets, and the topology set learned from TC floods. All reads
/// take `now` and ignore entries that have already expired; `expire()`
/// physically drops them.
///
/// Owned by exactly one simulated node; every mutation bumps `revision()`
/// when route-relevant content changed, which is what invalidates cached
/// routes upstream.
class ProtocolState {
 public:
  ProtocolState(NodeId self, SimTime neighbor_hold, SimTime topology_hold)
      : self_(self), neighbor_hold_(neighbor_hold), topology_hold_(topology_hold) {}

  [[nodiscard]] NodeId self_id() const { return self_; }

  [[nodiscard]] HelloMessage generate_hello(SimTime now) const;

  /// Advertises the current MPR selectors under a fresh sequence number.
  [[nodiscard]] TcMessage generate_tc(SimTime now);

  /// Link sensing + neighbor detection for one received HELLO. A HELLO from
  /// ourselves is counted and otherwise ignored.
  void process_hello(const HelloMessage& msg, SimTime now);

  /// Topology discovery for one received TC. Returns false when the message
  /// is older than what is already stored for its originator.
  bool process_tc(const TcMessage& msg, SimTime now);

  /// MPR flooding rule: retransmit iff the previous hop selected us as MPR
  /// and this (originator, sequence) has not been seen before. `seen` is
  /// owned by the caller and is not modified here.
  [[nodiscard]] bool should_forward_flood(const TcMessage& msg, NodeId previous_hop,
                                          const std::set<std::pair<NodeId, std::uint32_t>>& seen,
                                          SimTime now) const;

  /// Unit-cost graph over everything this node currently knows: itself, its
  /// symmetric neighbors, 2-hop pairs, and advertised remote links.
  [[nodiscard]] TopologyGraph build_topology_graph(SimTime now) const;

  /// Drops every entry whose expiry precedes `now` and recomputes MPRs if
  /// the neighborhood changed.
  void expire(SimTime now);

  /// Link-layer feedback path: the link to `neighbor` is known dead.
  void remove_neighbor(NodeId neighbor, SimTime now);

  void recompute_mprs(SimTime now);

  [[nodiscard]] bool is_symmetric_neighbor(NodeId id, SimTime now) const;
  [[nodiscard]] bool has_mpr_selector(NodeId id, SimTime now) const;

  [[nodiscard]] const std::set<NodeId>& mpr_set() const { return mprs_; }
  [[nodiscard]] std::set<NodeId> symmetric_neighbors(SimTime now) const;
  [[nodiscard]] const std::map<NodeId, NeighborEntry>& neighbor_set() const { return neighbors_; }
  [[nodiscard]] const std::map<std::pair<NodeId, NodeId>, SimTime>& two_hop_set() const { return two_hop_; }
  [[nodiscard]] const std::map<std::pair<NodeId, NodeId>, TopologyInfo>& topology_set() const { return topology_; }
  [[nodiscard]] const std::map<NodeId, SimTime>& mpr_selector_set() const { return selectors_; }

  [[nodiscard]] std::uint64_t revision() const { return revision_; }
  [[nodiscard]] std::uint64_t stale_tc_count() const { return stale_tc_count_; }
  [[nodiscard]] std::uint64_t self_message_count() const { return self_message_count_; }

 private:
  NodeId self_;
  SimTime neighbor_hold_;
  SimTime topology_hold_;

  std::map<NodeId, NeighborEntry> neighbors_;
  std::map<std::pair<NodeId, NodeId>, SimTime> two_hop_;  // (neighbor, two-hop) -> expiry
  std::set<NodeId> mprs_;
  std::map<NodeId, SimTime> selectors_;                             // selector -> expiry
  std::map<std::pair<NodeId, NodeId>, TopologyInfo> topology_;      // (last hop, dest) -> info
  std::map<NodeId, std::uint32_t> newest_topology_seq_;             // per TC originator

  std::uint32_t tc_sequence_ = 0;
  std::uint64_t revision_ = 0;
  std::uint64_t stale_tc_count_ = 0;
  std::uint64_t self_message_count_ = 0;
};

}  // namespace mpolsr
