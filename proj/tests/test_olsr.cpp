// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>

#include "mpolsr/olsr_state.hpp"
#include "test_support.hpp"

using namespace mpolsr;
using namespace mpolsr::testing;

namespace {

constexpr SimTime kNeighborHold{6};
constexpr SimTime kTopologyHold{15};

ProtocolState fresh_state(NodeId self = 0) { return ProtocolState(self, kNeighborHold, kTopologyHold); }

HelloMessage hello_from(NodeId origin, std::vector<std::pair<NodeId, LinkStatus>> listed) {
  HelloMessage msg;
  msg.originator = origin;
  msg.validity = kNeighborHold;
  msg.listed_neighbors = std::move(listed);
  return msg;
}

TcMessage tc_from(NodeId origin, std::uint32_t seq, std::vector<NodeId> advertised) {
  TcMessage msg;
  msg.originator = origin;
  msg.sequence = seq;
  msg.validity = kTopologyHold;
  msg.advertised = std::move(advertised);
  return msg;
}

}  // namespace

TEST_CASE("first hello makes an asymmetric neighbor") {
  ProtocolState state = fresh_state();
  state.process_hello(hello_from(3, {}), SimTime(1));
  REQUIRE(state.neighbor_set().count(3) == 1);
  CHECK(state.neighbor_set().at(3).status == LinkStatus::asymmetric);
  CHECK_FALSE(state.is_symmetric_neighbor(3, SimTime(1)));
}

TEST_CASE("hello listing us back completes the handshake and fills the 2-hop set") {
  ProtocolState state = fresh_state();
  state.process_hello(hello_from(3, {{0, LinkStatus::symmetric}, {9, LinkStatus::symmetric}}), SimTime(1));
  CHECK(state.is_symmetric_neighbor(3, SimTime(1)));
  CHECK(state.two_hop_set().count({3, 9}) == 1);
  // We never become our own 2-hop neighbor.
  CHECK(state.two_hop_set().count({3, 0}) == 0);
}

TEST_CASE("asymmetric listings do not create 2-hop entries") {
  ProtocolState state = fresh_state();
  state.process_hello(hello_from(3, {{0, LinkStatus::symmetric}, {9, LinkStatus::asymmetric}}), SimTime(1));
  CHECK(state.two_hop_set().count({3, 9}) == 0);
}

TEST_CASE("being listed as mpr registers a selector") {
  ProtocolState state = fresh_state();
  state.process_hello(hello_from(3, {{0, LinkStatus::mpr}}), SimTime(1));
  CHECK(state.has_mpr_selector(3, SimTime(1)));
  CHECK_FALSE(state.has_mpr_selector(3, SimTime(8)));  // past the hold
}

TEST_CASE("hello from ourselves is ignored but counted") {
  ProtocolState state = fresh_state();
  state.process_hello(hello_from(0, {{5, LinkStatus::symmetric}}), SimTime(1));
  CHECK(state.neighbor_set().empty());
  CHECK(state.self_message_count() == 1);
}

TEST_CASE("generated hello lists neighbors with their current status") {
  ProtocolState state = fresh_state();
  SUBCASE("empty state gives an empty listing") {
    CHECK(state.generate_hello(SimTime(1)).listed_neighbors.empty());
  }
  SUBCASE("symmetric, asymmetric and mpr markings") {
    // Node 2 becomes symmetric and covers a 2-hop node, so it gets picked
    // as MPR; node 5 stays asymmetric.
    state.process_hello(hello_from(2, {{0, LinkStatus::symmetric}, {7, LinkStatus::symmetric}}), SimTime(1));
    state.process_hello(hello_from(5, {}), SimTime(1));
    const HelloMessage msg = state.generate_hello(SimTime(2));
    REQUIRE(msg.listed_neighbors.size() == 2);
    CHECK(msg.listed_neighbors[0] == std::pair<NodeId, LinkStatus>{2, LinkStatus::mpr});
    CHECK(msg.listed_neighbors[1] == std::pair<NodeId, LinkStatus>{5, LinkStatus::asymmetric});
    CHECK(msg.originator == 0);
  }
}

TEST_CASE("mpr selection basics") {
  SUBCASE("the only candidate is chosen") {
    CHECK(select_mprs({2}, {{2, 7}}, 0) == std::set<NodeId>{2});
  }
  SUBCASE("equal coverage breaks toward the smaller id") {
    CHECK(select_mprs({2, 3}, {{2, 7}, {3, 7}}, 0) == std::set<NodeId>{2});
  }
  SUBCASE("no 2-hop nodes, no mprs") {
    CHECK(select_mprs({2, 3}, {}, 0).empty());
  }
  SUBCASE("sole reachability wins over raw coverage") {
    // Node 4 covers three 2-hop nodes, but node 2 is the only route to 10.
    const auto mprs = select_mprs({2, 4}, {{4, 11}, {4, 12}, {4, 13}, {2, 10}}, 0);
    CHECK(mprs.count(2) == 1);
    CHECK(mprs.count(4) == 1);
  }
  SUBCASE("neighbors and self never count as 2-hop targets") {
    CHECK(select_mprs({2, 3}, {{2, 3}, {2, 0}}, 0).empty());
  }
  SUBCASE("uncoverable targets are dropped from consideration") {
    CHECK(select_mprs({2}, {{9, 7}}, 0).empty());  // 9 is not symmetric
  }
}

TEST_CASE("mpr cover property over random neighborhoods") {
  DeterministicRng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int neighbor_count = 1 + static_cast<int>(rng.uniform_int(30));
    std::set<NodeId> neighbors;
    for (int i = 0; i < neighbor_count; ++i) neighbors.insert(static_cast<NodeId>(1 + rng.uniform_int(40)));

    const int link_count = static_cast<int>(rng.uniform_int(120));
    std::vector<std::pair<NodeId, NodeId>> links;
    for (int i = 0; i < link_count; ++i) {
      std::vector<NodeId> pool(neighbors.begin(), neighbors.end());
      const NodeId via = pool[rng.uniform_int(pool.size())];
      const NodeId target = static_cast<NodeId>(1 + rng.uniform_int(100));
      links.emplace_back(via, target);
    }
    const auto mprs = select_mprs(neighbors, links, 0);

    for (NodeId mpr : mprs) CHECK(neighbors.count(mpr) == 1);
    // Every strict 2-hop target reachable at all is covered by some MPR.
    for (const auto& [via, target] : links) {
      if (target == 0 || neighbors.count(target) != 0) continue;
      bool covered = false;
      for (const auto& [via2, target2] : links)
        if (target2 == target && mprs.count(via2) != 0) covered = true;
      CHECK(covered);
    }
  }
}

TEST_CASE("tc processing stores, replaces and rejects stale tuples") {
  ProtocolState state = fresh_state();
  CHECK(state.process_tc(tc_from(9, 5, {3, 4}), SimTime(1)));
  CHECK(state.topology_set().count({9, 3}) == 1);
  CHECK(state.topology_set().count({9, 4}) == 1);

  SUBCASE("older sequence is discarded and counted") {
    CHECK_FALSE(state.process_tc(tc_from(9, 4, {8}), SimTime(2)));
    CHECK(state.stale_tc_count() == 1);
    CHECK(state.topology_set().count({9, 3}) == 1);
    CHECK(state.topology_set().count({9, 8}) == 0);
  }
  SUBCASE("newer sequence replaces the originator's tuples") {
    CHECK(state.process_tc(tc_from(9, 6, {3}), SimTime(2)));
    CHECK(state.topology_set().count({9, 3}) == 1);
    CHECK(state.topology_set().count({9, 4}) == 0);
  }
  SUBCASE("tuples from other originators are untouched") {
    CHECK(state.process_tc(tc_from(7, 1, {2}), SimTime(2)));
    CHECK(state.process_tc(tc_from(9, 6, {4}), SimTime(2)));
    CHECK(state.topology_set().count({7, 2}) == 1);
  }
}

TEST_CASE("flood forwarding needs a selector previous hop and a fresh message") {
  ProtocolState state = fresh_state();
  state.process_hello(hello_from(3, {{0, LinkStatus::mpr}}), SimTime(1));
  const TcMessage msg = tc_from(9, 5, {1});
  std::set<std::pair<NodeId, std::uint32_t>> seen;

  CHECK(state.should_forward_flood(msg, 3, seen, SimTime(1)));
  seen.insert({9, 5});
  CHECK_FALSE(state.should_forward_flood(msg, 3, seen, SimTime(1)));
  CHECK_FALSE(state.should_forward_flood(msg, 4, {}, SimTime(1)));  // not a selector
}

TEST_CASE("topology graph over a full protocol state") {
  ProtocolState state = fresh_state(0);
  // Assemble the two-branch topology through the protocol itself: nodes 1
  // and 5 are our symmetric neighbors, their HELLOs expose the 2-hop layer,
  // TC floods bring the remote links.
  state.process_hello(hello_from(1, {{0, LinkStatus::symmetric}, {2, LinkStatus::symmetric}}), SimTime(1));
  state.process_hello(hello_from(5, {{0, LinkStatus::symmetric}, {6, LinkStatus::symmetric}}), SimTime(1));
  state.process_tc(tc_from(3, 1, {2, 4, 6}), SimTime(1));

  const TopologyGraph g = state.build_topology_graph(SimTime(2));
  CHECK(g == two_branch_graph());
}

TEST_CASE("topology graph of an empty state is just this node") {
  const TopologyGraph g = fresh_state(4).build_topology_graph(SimTime(0));
  CHECK(g.nodes() == std::set<NodeId>{4});
  CHECK(g.arcs().empty());
}

TEST_CASE("every arc in the built graph is justified by a live entry") {
  DeterministicRng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    ProtocolState state = fresh_state(0);
    const SimTime now(static_cast<std::int64_t>(trial));
    for (int i = 0; i < 6; ++i) {
      const NodeId origin = static_cast<NodeId>(1 + rng.uniform_int(8));
      std::vector<std::pair<NodeId, LinkStatus>> listed;
      if (rng.uniform() < 0.8) listed.emplace_back(0, LinkStatus::symmetric);
      const auto peer = static_cast<NodeId>(1 + rng.uniform_int(12));
      if (peer != origin) listed.emplace_back(peer, LinkStatus::symmetric);
      state.process_hello(hello_from(origin, listed), now);
    }
    for (int i = 0; i < 4; ++i) {
      const NodeId origin = static_cast<NodeId>(1 + rng.uniform_int(12));
      state.process_tc(tc_from(origin, static_cast<std::uint32_t>(i), {static_cast<NodeId>(1 + rng.uniform_int(12))}),
                       now);
    }

    // Oracle: rebuild the arc set straight from the raw entries.
    std::set<std::pair<NodeId, NodeId>> expected;
    for (const auto& [id, entry] : state.neighbor_set()) {
      if (entry.expiry < now || entry.status != LinkStatus::symmetric) continue;
      expected.insert({0, id});
      expected.insert({id, 0});
    }
    for (const auto& [key, expiry] : state.two_hop_set()) {
      if (expiry < now) continue;
      expected.insert(key);
      expected.insert({key.second, key.first});
    }
    for (const auto& [key, info] : state.topology_set()) {
      if (info.expiry < now) continue;
      expected.insert(key);
      expected.insert({key.second, key.first});
    }

    const TopologyGraph g = state.build_topology_graph(now);
    std::set<std::pair<NodeId, NodeId>> actual;
    for (const auto& [arc, cost] : g.arcs()) {
      CHECK(cost == Rational(1));
      actual.insert(arc);
    }
    CHECK(actual == expected);
  }
}

TEST_CASE("expiry removes exactly the entries whose time has passed") {
  ProtocolState state = fresh_state();
  state.process_hello(hello_from(2, {{0, LinkStatus::symmetric}, {7, LinkStatus::symmetric}}), SimTime(1));
  state.process_hello(hello_from(3, {{0, LinkStatus::symmetric}}), SimTime(4));
  state.process_tc(tc_from(9, 1, {4}), SimTime(1));

  SUBCASE("future expiries keep everything") {
    state.expire(SimTime(5));
    CHECK(state.neighbor_set().size() == 2);
    CHECK(state.topology_set().size() == 1);
  }
  SUBCASE("a lapsed neighbor disappears with its 2-hop entries") {
    state.expire(SimTime(8));  // node 2 held until 7, node 3 until 10
    CHECK(state.neighbor_set().count(2) == 0);
    CHECK(state.neighbor_set().count(3) == 1);
    CHECK(state.two_hop_set().count({2, 7}) == 0);
  }
}

TEST_CASE("expire matches a brute-force timestamp filter") {
  DeterministicRng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    ProtocolState state = fresh_state();
    for (int i = 0; i < 8; ++i) {
      const auto origin = static_cast<NodeId>(1 + rng.uniform_int(6));
      state.process_hello(hello_from(origin, {{0, LinkStatus::symmetric},
                                              {static_cast<NodeId>(1 + rng.uniform_int(9)), LinkStatus::symmetric}}),
                          SimTime(static_cast<std::int64_t>(rng.uniform_int(10))));
    }
    const SimTime cut(static_cast<std::int64_t>(rng.uniform_int(20)));

    std::set<NodeId> expected_neighbors;
    for (const auto& [id, entry] : state.neighbor_set())
      if (entry.expiry >= cut) expected_neighbors.insert(id);
    std::set<std::pair<NodeId, NodeId>> expected_two_hop;
    for (const auto& [key, expiry] : state.two_hop_set())
      if (expiry >= cut) expected_two_hop.insert(key);

    state.expire(cut);
    std::set<NodeId> actual_neighbors;
    for (const auto& [id, entry] : state.neighbor_set()) actual_neighbors.insert(id);
    std::set<std::pair<NodeId, NodeId>> actual_two_hop;
    for (const auto& [key, expiry] : state.two_hop_set()) actual_two_hop.insert(key);
    CHECK(actual_neighbors == expected_neighbors);
    CHECK(actual_two_hop == expected_two_hop);
  }
}

TEST_CASE("reads never surface lapsed entries") {
  ProtocolState state = fresh_state();
  state.process_hello(hello_from(2, {{0, LinkStatus::symmetric}}), SimTime(1));
  CHECK(state.is_symmetric_neighbor(2, SimTime(7)));       // hold is 6
  CHECK_FALSE(state.is_symmetric_neighbor(2, SimTime(8)));  // past it, even unswept
  CHECK(state.generate_hello(SimTime(8)).listed_neighbors.empty());
  CHECK(state.build_topology_graph(SimTime(8)).arcs().empty());
}

TEST_CASE("feedback removal drops the neighbor and bumps the revision") {
  ProtocolState state = fresh_state();
  state.process_hello(hello_from(2, {{0, LinkStatus::symmetric}}), SimTime(1));
  const std::uint64_t before = state.revision();
  state.remove_neighbor(2, SimTime(2));
  CHECK(state.revision() > before);
  CHECK_FALSE(state.is_symmetric_neighbor(2, SimTime(2)));
  // Removing it again is a no-op.
  const std::uint64_t after = state.revision();
  state.remove_neighbor(2, SimTime(2));
  CHECK(state.revision() == after);
}

TEST_CASE("static networks converge to a shared advertised-link picture") {
  // Synchronous rounds over a ground-truth connectivity graph: every round
  // all nodes exchange HELLOs with their true neighbors, then TCs flood
  // through the MPR relays. After three TC rounds every node must know
  // every link that the MPR advertisement rules put on the air.
  DeterministicRng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const TopologyGraph truth = random_connected_graph(rng, 10);
    const int n = static_cast<int>(truth.nodes().size());

    std::vector<ProtocolState> states;
    states.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) states.emplace_back(static_cast<NodeId>(i), kNeighborHold, kTopologyHold);
    std::vector<std::set<std::pair<NodeId, std::uint32_t>>> seen(static_cast<std::size_t>(n));

    const auto neighbors_of = [&](NodeId id) {
      std::set<NodeId> out;
      for (const auto& [arc, cost] : truth.arcs())
        if (arc.first == id) out.insert(arc.second);
      return out;
    };

    for (int round = 0; round < 4; ++round) {
      const SimTime now(round);
      // HELLO exchange.
      std::vector<HelloMessage> hellos;
      for (auto& state : states) hellos.push_back(state.generate_hello(now));
      for (int i = 0; i < n; ++i)
        for (NodeId peer : neighbors_of(static_cast<NodeId>(i)))
          states[peer].process_hello(hellos[static_cast<std::size_t>(i)], now);

      // TC flood: breadth-first over the truth graph with the MPR
      // forwarding rule deciding retransmissions.
      for (int origin = 0; origin < n; ++origin) {
        bool has_selector = false;
        for (const auto& [id, expiry] : states[static_cast<std::size_t>(origin)].mpr_selector_set())
          if (expiry >= now) has_selector = true;
        if (!has_selector) continue;
        const TcMessage tc = states[static_cast<std::size_t>(origin)].generate_tc(now);
        seen[static_cast<std::size_t>(origin)].insert({tc.originator, tc.sequence});

        std::map<NodeId, int> relays;  // flooding safety: one relay per node
        std::vector<std::pair<NodeId, NodeId>> wave;  // (receiver, previous hop)
        for (NodeId peer : neighbors_of(static_cast<NodeId>(origin))) wave.emplace_back(peer, origin);
        while (!wave.empty()) {
          std::vector<std::pair<NodeId, NodeId>> next_wave;
          for (const auto& [at, prev] : wave) {
            states[at].process_tc(tc, now);
            const bool relay = states[at].should_forward_flood(tc, prev, seen[at], now);
            seen[at].insert({tc.originator, tc.sequence});
            if (relay) {
              CHECK(++relays[at] == 1);
              for (NodeId peer : neighbors_of(at)) next_wave.emplace_back(peer, at);
            }
          }
          wave = std::move(next_wave);
        }
      }
    }

    // Which links did the advertisement rules put on the air? Link (u, v)
    // is advertised when v picked u as MPR (u then advertises v) or the
    // other way around.
    const SimTime now(3);
    for (int x = 0; x < n; ++x) {
      const TopologyGraph view = states[static_cast<std::size_t>(x)].build_topology_graph(now);
      for (const auto& [arc, cost] : truth.arcs()) {
        const auto [u, v] = arc;
        const bool advertised =
            states[v].mpr_set().count(u) != 0 || states[u].mpr_set().count(v) != 0;
        if (advertised) {
          CHECK(view.has_arc(u, v));
          CHECK(view.has_arc(v, u));
        }
      }
    }
  }
}
