// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#include "mpolsr/olsr_state.hpp"

#include <algorithm>

namespace mpolsr {

std::set<NodeId> select_mprs(const std::set<NodeId>& symmetric_neighbors,
                             const std::vector<std::pair<NodeId, NodeId>>& two_hop_links, NodeId self) {
  // coverage[t] = symmetric neighbors that reach strict 2-hop node t.
  std::map<NodeId, std::set<NodeId>> coverage;
  for (const auto& [neighbor, two_hop] : two_hop_links) {
    if (symmetric_neighbors.count(neighbor) == 0) continue;
    if (two_hop == self || symmetric_neighbors.count(two_hop) != 0) continue;
    coverage[two_hop].insert(neighbor);
  }

  std::set<NodeId> mprs;
  std::set<NodeId> uncovered;
  for (const auto& [target, through] : coverage) {
    if (through.empty()) continue;  // unreachable target, dropped from consideration
    uncovered.insert(target);
  }

  const auto mark_covered = [&](NodeId mpr) {
    for (auto it = uncovered.begin(); it != uncovered.end();) {
      if (coverage.at(*it).count(mpr) != 0)
        it = uncovered.erase(it);
      else
        ++it;
    }
  };

  // Sole reachability points first.
  for (const auto& [target, through] : coverage) {
    if (through.size() == 1 && uncovered.count(target) != 0) {
      const NodeId only = *through.begin();
      mprs.insert(only);
      mark_covered(only);
    }
  }

  while (!uncovered.empty()) {
    NodeId best = 0;
    std::size_t best_count = 0;
    for (NodeId candidate : symmetric_neighbors) {
      if (mprs.count(candidate) != 0) continue;
      std::size_t count = 0;
      for (NodeId target : uncovered)
        if (coverage.at(target).count(candidate) != 0) ++count;
      if (count > best_count) {  // ties keep the earlier (smaller) id
        best_count = count;
        best = candidate;
      }
    }
    if (best_count == 0) break;
    mprs.insert(best);
    mark_covered(best);
  }
  return mprs;
}

HelloMessage ProtocolState::generate_hello(SimTime now) const {
  HelloMessage msg;
  msg.originator = self_;
  msg.validity = neighbor_hold_;
  for (const auto& [id, entry] : neighbors_) {
    if (entry.expiry < now) continue;
    LinkStatus status = entry.status;
    if (status == LinkStatus::symmetric && mprs_.count(id) != 0) status = LinkStatus::mpr;
    msg.listed_neighbors.emplace_back(id, status);
  }
  return msg;
}

TcMessage ProtocolState::generate_tc(SimTime now) {
  TcMessage msg;
  msg.originator = self_;
  msg.sequence = tc_sequence_++;
  msg.validity = topology_hold_;
  for (const auto& [id, expiry] : selectors_)
    if (expiry >= now) msg.advertised.push_back(id);
  return msg;
}

void ProtocolState::process_hello(const HelloMessage& msg, SimTime now) {
  if (msg.originator == self_) {
    ++self_message_count_;
    return;
  }

  bool neighborhood_changed = false;

  // We are symmetric from the originator's point of view iff it heard us.
  LinkStatus our_status = LinkStatus::asymmetric;
  for (const auto& [id, status] : msg.listed_neighbors) {
    if (id != self_) continue;
    our_status = LinkStatus::symmetric;
    if (status == LinkStatus::mpr) selectors_[msg.originator] = now + msg.validity;
  }

  auto it = neighbors_.find(msg.originator);
  if (it == neighbors_.end() || it->second.expiry < now || it->second.status != our_status)
    neighborhood_changed = true;
  neighbors_[msg.originator] = NeighborEntry{our_status, now + msg.validity};

  if (our_status == LinkStatus::symmetric) {
    for (const auto& [id, status] : msg.listed_neighbors) {
      if (id == self_) continue;
      if (status == LinkStatus::asymmetric) continue;
      const auto key = std::make_pair(msg.originator, id);
      auto tit = two_hop_.find(key);
      if (tit == two_hop_.end() || tit->second < now) neighborhood_changed = true;
      two_hop_[key] = now + msg.validity;
    }
  }

  if (neighborhood_changed) {
    recompute_mprs(now);
    ++revision_;
  }
}

bool ProtocolState::process_tc(const TcMessage& msg, SimTime now) {
  if (msg.originator == self_) {
    ++self_message_count_;
    return false;
  }
  auto sit = newest_topology_seq_.find(msg.originator);
  if (sit != newest_topology_seq_.end() && msg.sequence < sit->second) {
    ++stale_tc_count_;
    return false;
  }
  newest_topology_seq_[msg.originator] = msg.sequence;

  std::set<NodeId> previous;
  for (auto it = topology_.begin(); it != topology_.end();) {
    if (it->first.first == msg.originator) {
      if (it->second.expiry >= now) previous.insert(it->first.second);
      it = topology_.erase(it);
    } else {
      ++it;
    }
  }
  std::set<NodeId> advertised;
  for (NodeId dest : msg.advertised) {
    if (dest == msg.originator) continue;
    topology_[{msg.originator, dest}] = TopologyInfo{msg.sequence, now + msg.validity};
    advertised.insert(dest);
  }
  if (advertised != previous) ++revision_;
  return true;
}

bool ProtocolState::should_forward_flood(const TcMessage& msg, NodeId previous_hop,
                                         const std::set<std::pair<NodeId, std::uint32_t>>& seen,
                                         SimTime now) const {
  if (!has_mpr_selector(previous_hop, now)) return false;
  return seen.count({msg.originator, msg.sequence}) == 0;
}

TopologyGraph ProtocolState::build_topology_graph(SimTime now) const {
  TopologyGraph graph;
  graph.add_node(self_);
  for (const auto& [id, entry] : neighbors_) {
    if (entry.expiry < now || entry.status != LinkStatus::symmetric) continue;
    if (!graph.has_arc(self_, id)) graph.add_link(self_, id);
  }
  for (const auto& [key, expiry] : two_hop_) {
    if (expiry < now) continue;
    const auto [neighbor, two_hop] = key;
    if (neighbor == two_hop) continue;
    if (!graph.has_arc(neighbor, two_hop)) graph.add_arc(neighbor, two_hop, Rational(1));
    if (!graph.has_arc(two_hop, neighbor)) graph.add_arc(two_hop, neighbor, Rational(1));
  }
  for (const auto& [key, info] : topology_) {
    if (info.expiry < now) continue;
    const auto [last_hop, dest] = key;
    if (!graph.has_arc(last_hop, dest)) graph.add_arc(last_hop, dest, Rational(1));
    if (!graph.has_arc(dest, last_hop)) graph.add_arc(dest, last_hop, Rational(1));
  }
  return graph;
}

void ProtocolState::expire(SimTime now) {
  bool neighborhood_changed = false;
  bool any_removed = false;

  for (auto it = neighbors_.begin(); it != neighbors_.end();) {
    if (it->second.expiry < now) {
      it = neighbors_.erase(it);
      neighborhood_changed = any_removed = true;
    } else {
      ++it;
    }
  }
  for (auto it = two_hop_.begin(); it != two_hop_.end();) {
    if (it->second < now) {
      it = two_hop_.erase(it);
      neighborhood_changed = any_removed = true;
    } else {
      ++it;
    }
  }
  for (auto it = selectors_.begin(); it != selectors_.end();) {
    if (it->second < now) {
      it = selectors_.erase(it);
      any_removed = true;
    } else {
      ++it;
    }
  }
  for (auto it = topology_.begin(); it != topology_.end();) {
    if (it->second.expiry < now) {
      it = topology_.erase(it);
      any_removed = true;
    } else {
      ++it;
    }
  }

  if (neighborhood_changed) recompute_mprs(now);
  if (any_removed) ++revision_;
}

void ProtocolState::remove_neighbor(NodeId neighbor, SimTime now) {
  if (neighbors_.erase(neighbor) == 0) return;
  recompute_mprs(now);
  ++revision_;
}

void ProtocolState::recompute_mprs(SimTime now) {
  std::set<NodeId> symmetric;
  for (const auto& [id, entry] : neighbors_)
    if (entry.expiry >= now && entry.status == LinkStatus::symmetric) symmetric.insert(id);

  std::vector<std::pair<NodeId, NodeId>> links;
  links.reserve(two_hop_.size());
  for (const auto& [key, expiry] : two_hop_)
    if (expiry >= now) links.push_back(key);

  mprs_ = select_mprs(symmetric, links, self_);
}

bool ProtocolState::is_symmetric_neighbor(NodeId id, SimTime now) const {
  auto it = neighbors_.find(id);
  return it != neighbors_.end() && it->second.expiry >= now && it->second.status == LinkStatus::symmetric;
}

bool ProtocolState::has_mpr_selector(NodeId id, SimTime now) const {
  auto it = selectors_.find(id);
  return it != selectors_.end() && it->second >= now;
}

std::set<NodeId> ProtocolState::symmetric_neighbors(SimTime now) const {
  std::set<NodeId> out;
  for (const auto& [id, entry] : neighbors_)
    if (entry.expiry >= now && entry.status == LinkStatus::symmetric) out.insert(id);
  return out;
}

}  // namespace mpolsr
