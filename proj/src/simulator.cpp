// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#include "mpolsr/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <memory>
#include <ostream>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "mpolsr/mdc_stream.hpp"
#include "mpolsr/mojette.hpp"
#include "mpolsr/olsr_state.hpp"
#include "mpolsr/routing.hpp"

namespace mpolsr {

bool in_range(double ax, double ay, double bx, double by, double range_m) {
  const double dx = ax - bx;
  const double dy = ay - by;
  return dx * dx + dy * dy <= range_m * range_m;
}

SimTime service_time(std::size_t frame_bytes, std::int64_t bandwidth_bps) {
  return SimTime(static_cast<std::int64_t>(frame_bytes) * 8, bandwidth_bps);
}

void mobility_step(MobilityState& node, SimTime now, SimTime dt, double area_width, double area_height,
                   double v_min, double v_max, SimTime pause, DeterministicRng& rng) {
  if (node.paused) {
    if (node.pause_until > now) return;
    node.waypoint_x = rng.uniform(0.0, area_width);
    node.waypoint_y = rng.uniform(0.0, area_height);
    node.speed = rng.uniform(v_min, v_max);
    node.paused = false;
  }
  if (node.speed <= 0.0) return;

  const double dx = node.waypoint_x - node.x;
  const double dy = node.waypoint_y - node.y;
  const double distance = std::sqrt(dx * dx + dy * dy);
  const double step = node.speed * dt.to_double();
  if (distance <= step) {
    node.x = node.waypoint_x;
    node.y = node.waypoint_y;
    node.paused = true;
    node.pause_until = now + pause;
    return;
  }
  node.x += dx / distance * step;
  node.y += dy / distance * step;
}

namespace {

constexpr std::size_t kControlHeaderBytes = 16;
constexpr std::size_t kControlEntryBytes = 8;
constexpr std::size_t kDataHeaderBytes = 16;
constexpr std::size_t kSourceRouteHopBytes = 4;

enum class EventKind : std::uint8_t {
  hello_due,
  tc_due,
  cbr_send,
  mac_dequeue,
  packet_arrival,
  expiry_sweep,
  mobility_update,
  mdc_flush,
  sim_end,
};

struct Frame {
  enum class Kind : std::uint8_t { hello, tc, data } kind = Kind::data;
  HelloMessage hello;
  TcMessage tc;
  DataPacket data;
  std::shared_ptr<const EncodedDescription> description;  // set for MDC data
  NodeId sender = 0;
  bool broadcast = false;
  NodeId unicast_dest = 0;
  std::size_t size_bytes = 0;
};

struct Event {
  SimTime time;
  std::uint64_t ordinal = 0;
  EventKind kind = EventKind::sim_end;
  NodeId node = 0;
  std::uint32_t flow = 0;
  std::uint64_t group = 0;
  std::shared_ptr<Frame> frame;
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return b.time < a.time;
    return a.ordinal > b.ordinal;
  }
};

struct Flow {
  std::uint32_t id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  std::uint64_t next_seq = 0;
};

struct SimNode {
  SimNode(NodeId id, const Scenario& scenario)
      : id(id),
        state(id, scenario.neighbor_hold(), scenario.topology_hold()),
        routes(scenario.n_routes, CostPolicy{scenario.fp_mult, scenario.fe_mult}) {}

  NodeId id;
  MobilityState mobility;
  ProtocolState state;
  RouteCache routes;
  RoutingTable table;
  std::deque<std::shared_ptr<Frame>> mac_queue;
  bool mac_busy = false;
  std::set<std::pair<NodeId, std::uint32_t>> seen_floods;
  std::map<std::uint32_t, MdcSendBuffer> mdc_out;
  std::map<std::uint32_t, MdcReassembler> mdc_in;
  std::uint64_t forwarded_data = 0;
};

/// Deterministic per-packet filler so the MDC path round-trips real bytes.
std::vector<std::uint8_t> synthetic_payload(std::uint32_t flow, std::uint64_t seq, std::size_t size) {
  std::vector<std::uint8_t> out(size);
  std::uint64_t state = (static_cast<std::uint64_t>(flow) << 32) ^ seq ^ 0x9e3779b97f4a7c15ULL;
  for (auto& byte : out) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    byte = static_cast<std::uint8_t>(state);
  }
  return out;
}

class Simulation {
 public:
  Simulation(const Scenario& scenario, std::ostream* trace) : scenario_(scenario), rng_(scenario.seed), trace_(trace) {
    scenario_.validate();
    if (scenario_.cbr_flows > 0 && scenario_.cbr_pairs.empty() && scenario_.node_count < 2)
      throw InvalidScenario("invalid scenario: traffic needs at least two nodes");
  }

  MetricsReport run();

 private:
  // --- setup ---------------------------------------------------------
  void place_nodes();
  void create_flows();
  void schedule_initial_events();

  // --- event handlers ------------------------------------------------
  void handle(const Event& event);
  void on_hello_due(NodeId node);
  void on_tc_due(NodeId node);
  void on_cbr_send(std::uint32_t flow_id);
  void on_mac_dequeue(NodeId node);
  void on_packet_arrival(NodeId node, const Frame& frame);
  void on_expiry_sweep();
  void on_mobility_update();
  void on_mdc_flush(NodeId node, std::uint32_t flow_id, std::uint64_t group_id);

  // --- helpers -------------------------------------------------------
  void schedule(SimTime time, Event event);
  void enqueue_frame(SimNode& sender, std::shared_ptr<Frame> frame);
  void send_source_routed(SimNode& source, DataPacket packet, const Path& route);
  void emit_descriptions(SimNode& source, std::uint32_t flow_id, std::vector<EncodedDescription> descriptions);
  void deliver(SimNode& node, const DataPacket& packet);
  void drop_data(NodeId at, const DataPacket& packet, DropReason reason);
  void handle_data_arrival(SimNode& node, Frame& frame);
  std::size_t data_frame_size(const DataPacket& packet) const;
  void trace_line(SimTime time, NodeId node, const std::string& kind, const std::string& detail);
  void finalize();

  [[nodiscard]] bool nodes_in_range(NodeId a, NodeId b) const {
    return in_range(nodes_[a].mobility.x, nodes_[a].mobility.y, nodes_[b].mobility.x, nodes_[b].mobility.y,
                    scenario_.tx_range_m);
  }

  Scenario scenario_;
  DeterministicRng rng_;
  std::ostream* trace_;

  std::vector<SimNode> nodes_;
  std::vector<Flow> flows_;
  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  std::uint64_t next_ordinal_ = 0;
  SimTime now_{0};
  bool ended_ = false;

  MetricsReport report_;
  std::map<DropReason, std::uint64_t> description_drops_;
  std::uint64_t descriptions_sent_ = 0;
};

void Simulation::trace_line(SimTime time, NodeId node, const std::string& kind, const std::string& detail) {
  if (trace_ == nullptr) return;
  *trace_ << time.to_decimal(9) << ' ' << node << ' ' << kind;
  if (!detail.empty()) *trace_ << ' ' << detail;
  *trace_ << '\n';
}

void Simulation::schedule(SimTime time, Event event) {
  event.time = time;
  event.ordinal = next_ordinal_++;
  queue_.push(std::move(event));
}

void Simulation::place_nodes() {
  nodes_.reserve(static_cast<std::size_t>(scenario_.node_count));
  for (int i = 0; i < scenario_.node_count; ++i) nodes_.emplace_back(static_cast<NodeId>(i), scenario_);

  for (auto& node : nodes_) {
    if (scenario_.placement == Scenario::Placement::line) {
      node.mobility.x = (static_cast<double>(node.id) + 0.5) * scenario_.area_width_m / scenario_.node_count;
      node.mobility.y = scenario_.area_height_m / 2.0;
    } else {
      node.mobility.x = rng_.uniform(0.0, scenario_.area_width_m);
      node.mobility.y = rng_.uniform(0.0, scenario_.area_height_m);
    }
    node.mobility.waypoint_x = node.mobility.x;
    node.mobility.waypoint_y = node.mobility.y;
    node.mobility.paused = true;
    node.mobility.pause_until = SimTime(0);
    trace_line(SimTime(0), node.id, "place",
               "x=" + std::to_string(node.mobility.x) + " y=" + std::to_string(node.mobility.y));
  }
}

void Simulation::create_flows() {
  const auto n = static_cast<std::uint64_t>(scenario_.node_count);
  for (int i = 0; i < scenario_.cbr_flows; ++i) {
    Flow flow;
    flow.id = static_cast<std::uint32_t>(i);
    if (i < static_cast<int>(scenario_.cbr_pairs.size())) {
      flow.src = static_cast<NodeId>(scenario_.cbr_pairs[static_cast<std::size_t>(i)].first);
      flow.dst = static_cast<NodeId>(scenario_.cbr_pairs[static_cast<std::size_t>(i)].second);
    } else {
      flow.src = static_cast<NodeId>(rng_.uniform_int(n));
      do {
        flow.dst = static_cast<NodeId>(rng_.uniform_int(n));
      } while (flow.dst == flow.src);
    }
    flows_.push_back(flow);
  }
}

void Simulation::schedule_initial_events() {
  // Initial HELLO/TC offsets are drawn per node so the whole network does
  // not broadcast in lockstep.
  for (const auto& node : nodes_) {
    const SimTime hello_offset = scenario_.hello_interval_s * SimTime(static_cast<std::int64_t>(rng_.uniform_int(1000)), 1000);
    const SimTime tc_offset = scenario_.tc_interval_s * SimTime(static_cast<std::int64_t>(rng_.uniform_int(1000)), 1000);
    Event hello;
    hello.kind = EventKind::hello_due;
    hello.node = node.id;
    schedule(hello_offset, hello);
    Event tc;
    tc.kind = EventKind::tc_due;
    tc.node = node.id;
    schedule(tc_offset, tc);
  }
  for (const auto& flow : flows_) {
    Event send;
    send.kind = EventKind::cbr_send;
    send.flow = flow.id;
    schedule(scenario_.warmup_s, send);
  }
  Event mobility;
  mobility.kind = EventKind::mobility_update;
  schedule(scenario_.mobility_tick_s, mobility);
  Event sweep;
  sweep.kind = EventKind::expiry_sweep;
  schedule(scenario_.expiry_sweep_s, sweep);
  Event end;
  end.kind = EventKind::sim_end;
  schedule(scenario_.duration_s, end);
}

MetricsReport Simulation::run() {
  place_nodes();
  create_flows();
  schedule_initial_events();

  while (!queue_.empty() && !ended_) {
    const Event event = queue_.top();
    queue_.pop();
    now_ = event.time;
    handle(event);
  }
  finalize();
  return report_;
}

void Simulation::handle(const Event& event) {
  switch (event.kind) {
    case EventKind::hello_due: on_hello_due(event.node); break;
    case EventKind::tc_due: on_tc_due(event.node); break;
    case EventKind::cbr_send: on_cbr_send(event.flow); break;
    case EventKind::mac_dequeue: on_mac_dequeue(event.node); break;
    case EventKind::packet_arrival: on_packet_arrival(event.node, *event.frame); break;
    case EventKind::expiry_sweep: on_expiry_sweep(); break;
    case EventKind::mobility_update: on_mobility_update(); break;
    case EventKind::mdc_flush: on_mdc_flush(event.node, event.flow, event.group); break;
    case EventKind::sim_end: ended_ = true; break;
  }
}

void Simulation::on_hello_due(NodeId id) {
  SimNode& node = nodes_[id];
  auto frame = std::make_shared<Frame>();
  frame->kind = Frame::Kind::hello;
  frame->hello = node.state.generate_hello(now_);
  frame->broadcast = true;
  frame->size_bytes = kControlHeaderBytes + kControlEntryBytes * frame->hello.listed_neighbors.size();
  enqueue_frame(node, std::move(frame));

  Event next;
  next.kind = EventKind::hello_due;
  next.node = id;
  schedule(now_ + scenario_.hello_interval_s, next);
}

void Simulation::on_tc_due(NodeId id) {
  SimNode& node = nodes_[id];
  bool has_selector = false;
  for (const auto& [selector, expiry] : node.state.mpr_selector_set())
    if (expiry >= now_) has_selector = true;
  if (has_selector) {
    auto frame = std::make_shared<Frame>();
    frame->kind = Frame::Kind::tc;
    frame->tc = node.state.generate_tc(now_);
    frame->broadcast = true;
    frame->size_bytes = kControlHeaderBytes + kControlEntryBytes * frame->tc.advertised.size();
    node.seen_floods.insert({frame->tc.originator, frame->tc.sequence});
    enqueue_frame(node, std::move(frame));
  }

  Event next;
  next.kind = EventKind::tc_due;
  next.node = id;
  schedule(now_ + scenario_.tc_interval_s, next);
}

std::size_t Simulation::data_frame_size(const DataPacket& packet) const {
  std::size_t size = kDataHeaderBytes + packet.payload_size;
  if (packet.header) size += kSourceRouteHopBytes * packet.header->route.size();
  return size;
}

void Simulation::send_source_routed(SimNode& source, DataPacket packet, const Path& route) {
  SourceRouteHeader header;
  header.route = route.hops;
  header.cursor = 0;
  packet.header = std::move(header);

  auto frame = std::make_shared<Frame>();
  frame->kind = Frame::Kind::data;
  frame->unicast_dest = packet.header->route[1];
  frame->size_bytes = data_frame_size(packet);
  frame->data = std::move(packet);
  enqueue_frame(source, std::move(frame));
}

void Simulation::emit_descriptions(SimNode& source, std::uint32_t flow_id,
                                   std::vector<EncodedDescription> descriptions) {
  const Flow& flow = flows_[flow_id];
  const auto* routes = source.routes.routes(source.state, flow.dst, now_);
  for (auto& desc : descriptions) {
    DataPacket packet;
    packet.flow_id = flow_id;
    packet.sequence = desc.group->group_id * static_cast<std::uint64_t>(scenario_.mdc_n) + desc.index;
    packet.src = source.id;
    packet.dst = flow.dst;
    packet.payload_size = desc.wire_size();
    packet.mdc_tag = MdcTag{desc.group->group_id, desc.index};
    packet.created_at = now_;
    packet.ttl = scenario_.ttl;

    ++descriptions_sent_;
    trace_line(now_, source.id, "desc_send",
               "flow=" + std::to_string(flow_id) + " group=" + std::to_string(desc.group->group_id) +
                   " idx=" + std::to_string(desc.index));
    if (routes == nullptr) {
      ++description_drops_[DropReason::no_route];
      trace_line(now_, source.id, "desc_drop",
                 "flow=" + std::to_string(flow_id) + " group=" + std::to_string(desc.group->group_id) +
                     " idx=" + std::to_string(desc.index) + " reason=no_route");
      continue;
    }
    const Path& path = allocate_route(desc.index, *routes);
    auto shared = std::make_shared<EncodedDescription>(std::move(desc));
    auto frame = std::make_shared<Frame>();
    frame->kind = Frame::Kind::data;
    frame->description = shared;

    SourceRouteHeader header;
    header.route = path.hops;
    header.cursor = 0;
    packet.header = std::move(header);
    frame->unicast_dest = packet.header->route[1];
    frame->size_bytes = data_frame_size(packet);
    frame->data = std::move(packet);
    enqueue_frame(source, std::move(frame));
  }
}

void Simulation::on_cbr_send(std::uint32_t flow_id) {
  Flow& flow = flows_[flow_id];
  if (now_ >= scenario_.traffic_stop()) return;
  if (scenario_.cbr_max_packets != 0 && flow.next_seq >= scenario_.cbr_max_packets) return;

  SimNode& source = nodes_[flow.src];
  DataPacket packet;
  packet.flow_id = flow_id;
  packet.sequence = flow.next_seq++;
  packet.src = flow.src;
  packet.dst = flow.dst;
  packet.payload_size = scenario_.cbr_payload_bytes;
  packet.created_at = now_;
  packet.ttl = scenario_.ttl;

  ++report_.data_sent;
  trace_line(now_, flow.src, "data_send", "flow=" + std::to_string(flow_id) + " seq=" + std::to_string(packet.sequence));

  if (scenario_.variant == Variant::mdc_mpolsr) {
    OriginalPacketMeta meta{packet.sequence, now_, packet.payload_size};
    auto [buffer_it, created] = source.mdc_out.try_emplace(
        flow_id, CodecConfig::with_default_dirs(scenario_.mdc_n, scenario_.mdc_m),
        static_cast<std::size_t>(scenario_.mdc_group_size));
    MdcSendBuffer& buffer = buffer_it->second;
    auto emitted = buffer.add(meta, synthetic_payload(flow_id, packet.sequence, packet.payload_size));
    if (emitted) {
      emit_descriptions(source, flow_id, std::move(*emitted));
    } else if (buffer.pending_count() == 1) {
      Event flush;
      flush.kind = EventKind::mdc_flush;
      flush.node = flow.src;
      flush.flow = flow_id;
      flush.group = buffer.open_group_id();
      const SimTime timeout = SimTime(2 * scenario_.mdc_group_size) / scenario_.cbr_rate_pps;
      schedule(now_ + timeout, flush);
    }
  } else if (variant_is_multipath(scenario_.variant)) {
    const auto* routes = source.routes.routes(source.state, flow.dst, now_);
    if (routes == nullptr) {
      drop_data(flow.src, packet, DropReason::no_route);
    } else {
      const Path& route = allocate_route(packet.sequence, *routes);
      send_source_routed(source, std::move(packet), route);
    }
  } else {
    auto next = source.table.next_hop(source.state, flow.dst, now_);
    if (!next) {
      drop_data(flow.src, packet, DropReason::no_route);
    } else {
      auto frame = std::make_shared<Frame>();
      frame->kind = Frame::Kind::data;
      frame->unicast_dest = *next;
      frame->size_bytes = data_frame_size(packet);
      frame->data = std::move(packet);
      enqueue_frame(source, std::move(frame));
    }
  }

  Event next_send;
  next_send.kind = EventKind::cbr_send;
  next_send.flow = flow_id;
  schedule(now_ + SimTime(1) / scenario_.cbr_rate_pps, next_send);
}

void Simulation::on_mdc_flush(NodeId node_id, std::uint32_t flow_id, std::uint64_t group_id) {
  SimNode& node = nodes_[node_id];
  auto it = node.mdc_out.find(flow_id);
  if (it == node.mdc_out.end()) return;
  auto emitted = it->second.flush(group_id);
  if (emitted) emit_descriptions(node, flow_id, std::move(*emitted));
}

void Simulation::enqueue_frame(SimNode& sender, std::shared_ptr<Frame> frame) {
  frame->sender = sender.id;
  sender.mac_queue.push_back(std::move(frame));
  if (!sender.mac_busy) {
    sender.mac_busy = true;
    Event dequeue;
    dequeue.kind = EventKind::mac_dequeue;
    dequeue.node = sender.id;
    schedule(now_, dequeue);
  }
}

void Simulation::on_mac_dequeue(NodeId id) {
  SimNode& node = nodes_[id];
  if (node.mac_queue.empty()) {
    node.mac_busy = false;
    return;
  }
  auto frame = node.mac_queue.front();
  node.mac_queue.pop_front();

  const SimTime service = service_time(frame->size_bytes + scenario_.mac_overhead_bytes, scenario_.bandwidth_bps);
  SimTime busy_until = now_ + service;

  if (frame->broadcast) {
    ++report_.control_transmissions;
    trace_line(now_, id, "control_tx", frame->kind == Frame::Kind::hello ? "kind=hello" : "kind=tc");
    for (const auto& other : nodes_) {
      if (other.id == id) continue;
      if (!nodes_in_range(id, other.id)) continue;
      Event arrival;
      arrival.kind = EventKind::packet_arrival;
      arrival.node = other.id;
      arrival.frame = frame;
      schedule(now_ + service, arrival);
    }
  } else {
    const DataPacket& packet = frame->data;
    if (packet.src != id) {
      ++node.forwarded_data;
      trace_line(now_, id, "data_forward",
                 "flow=" + std::to_string(packet.flow_id) + " seq=" + std::to_string(packet.sequence));
    }
    if (nodes_in_range(id, frame->unicast_dest)) {
      Event arrival;
      arrival.kind = EventKind::packet_arrival;
      arrival.node = frame->unicast_dest;
      arrival.frame = frame;
      schedule(now_ + service, arrival);
    } else {
      // The receiver has moved away: the retry burst burns airtime, then
      // the frame dies at the MAC and (per variant) the routing layer
      // hears about the dead link.
      busy_until = now_ + service * SimTime(scenario_.mac_retry_factor);
      drop_data(id, packet, DropReason::link);
      if (variant_has_feedback(scenario_.variant)) {
        node.state.remove_neighbor(frame->unicast_dest, now_);
        trace_line(now_, id, "link_feedback", "neighbor=" + std::to_string(frame->unicast_dest));
      }
    }
  }

  Event next;
  next.kind = EventKind::mac_dequeue;
  next.node = id;
  schedule(busy_until, next);
}

void Simulation::deliver(SimNode& node, const DataPacket& packet) {
  ++report_.data_delivered;
  const SimTime delay = now_ - packet.created_at;
  report_.per_packet_delay.push_back(delay.to_double());
  trace_line(now_, node.id, "data_deliver",
             "flow=" + std::to_string(packet.flow_id) + " seq=" + std::to_string(packet.sequence) +
                 " delay=" + delay.to_string());
}

void Simulation::drop_data(NodeId at, const DataPacket& packet, DropReason reason) {
  if (packet.mdc_tag) {
    ++description_drops_[reason];
    trace_line(now_, at, "desc_drop",
               "flow=" + std::to_string(packet.flow_id) + " group=" + std::to_string(packet.mdc_tag->group_id) +
                   " idx=" + std::to_string(packet.mdc_tag->description_index) + " reason=" +
                   drop_reason_name(reason));
    return;
  }
  ++report_.drop_reasons[reason];
  trace_line(now_, at, "data_drop",
             "flow=" + std::to_string(packet.flow_id) + " seq=" + std::to_string(packet.sequence) +
                 " reason=" + drop_reason_name(reason));
}

void Simulation::handle_data_arrival(SimNode& node, Frame& frame) {
  DataPacket& packet = frame.data;

  if (!packet.header) {
    // Hop-by-hop unipath forwarding.
    if (node.id == packet.dst) {
      deliver(node, packet);
      return;
    }
    if (--packet.ttl <= 0) {
      drop_data(node.id, packet, DropReason::ttl_exceeded);
      return;
    }
    auto next = node.table.next_hop(node.state, packet.dst, now_);
    if (!next) {
      drop_data(node.id, packet, DropReason::no_route);
      return;
    }
    auto forwarded = std::make_shared<Frame>(frame);
    forwarded->unicast_dest = *next;
    enqueue_frame(node, std::move(forwarded));
    return;
  }

  SourceRouteHeader& header = *packet.header;
  if (header.cursor + 1 >= header.route.size() || header.route[header.cursor + 1] != node.id)
    throw MisroutedPacket("arrival at a node that is not the next hop");
  ++header.cursor;
  if (header.cursor + 1 < header.route.size()) --packet.ttl;  // consumed a relay hop

  const ForwardDecision decision =
      forward(node.state, packet, now_, scenario_.recovery_cap, variant_has_recovery(scenario_.variant));
  switch (decision.kind) {
    case ForwardDecision::Kind::deliver: {
      if (packet.mdc_tag) {
        auto [it, created] = node.mdc_in.try_emplace(
            packet.flow_id, CodecConfig::with_default_dirs(scenario_.mdc_n, scenario_.mdc_m));
        auto decoded = it->second.add(*frame.description);
        if (decoded) {
          for (const auto& original : decoded->originals) {
            ++report_.data_delivered;
            const SimTime delay = now_ - original.created_at;
            report_.per_packet_delay.push_back(delay.to_double());
            trace_line(now_, node.id, "data_deliver",
                       "flow=" + std::to_string(packet.flow_id) + " seq=" + std::to_string(original.sequence) +
                           " delay=" + delay.to_string());
          }
        }
      } else {
        deliver(node, packet);
      }
      return;
    }
    case ForwardDecision::Kind::forward_to: {
      auto forwarded = std::make_shared<Frame>(frame);
      forwarded->unicast_dest = decision.next_hop;
      forwarded->size_bytes = data_frame_size(forwarded->data);
      enqueue_frame(node, std::move(forwarded));
      return;
    }
    case ForwardDecision::Kind::recovered: {
      auto forwarded = std::make_shared<Frame>(frame);
      forwarded->data.header->route = decision.new_route;
      ++forwarded->data.header->recovery_count;
      forwarded->unicast_dest = decision.next_hop;
      forwarded->size_bytes = data_frame_size(forwarded->data);
      trace_line(now_, node.id, "recovery",
                 "flow=" + std::to_string(packet.flow_id) + " seq=" + std::to_string(packet.sequence) +
                     " next=" + std::to_string(decision.next_hop));
      enqueue_frame(node, std::move(forwarded));
      return;
    }
    case ForwardDecision::Kind::drop:
      drop_data(node.id, packet, decision.reason);
      return;
  }
}

void Simulation::on_packet_arrival(NodeId id, const Frame& frame) {
  SimNode& node = nodes_[id];
  switch (frame.kind) {
    case Frame::Kind::hello:
      node.state.process_hello(frame.hello, now_);
      return;
    case Frame::Kind::tc: {
      node.state.process_tc(frame.tc, now_);
      const bool forward_it = node.state.should_forward_flood(frame.tc, frame.sender, node.seen_floods, now_);
      node.seen_floods.insert({frame.tc.originator, frame.tc.sequence});
      if (forward_it) {
        auto copy = std::make_shared<Frame>(frame);
        copy->sender = id;
        enqueue_frame(node, std::move(copy));
      }
      return;
    }
    case Frame::Kind::data: {
      Frame working = frame;  // mutable copy; cursor/ttl change per hop
      handle_data_arrival(node, working);
      return;
    }
  }
}

void Simulation::on_expiry_sweep() {
  for (auto& node : nodes_) node.state.expire(now_);
  Event next;
  next.kind = EventKind::expiry_sweep;
  schedule(now_ + scenario_.expiry_sweep_s, next);
}

void Simulation::on_mobility_update() {
  for (auto& node : nodes_) {
    mobility_step(node.mobility, now_, scenario_.mobility_tick_s, scenario_.area_width_m, scenario_.area_height_m,
                  scenario_.v_min_mps, scenario_.v_max_mps, scenario_.pause_s, rng_);
  }
  Event next;
  next.kind = EventKind::mobility_update;
  schedule(now_ + scenario_.mobility_tick_s, next);
}

void Simulation::finalize() {
  // Data still sitting in queues or in flight never made it.
  for (auto& node : nodes_) {
    for (const auto& frame : node.mac_queue)
      if (frame->kind == Frame::Kind::data) drop_data(node.id, frame->data, DropReason::sim_end);
    node.mac_queue.clear();
  }
  while (!queue_.empty()) {
    const Event event = queue_.top();
    queue_.pop();
    if (event.kind == EventKind::packet_arrival && event.frame && event.frame->kind == Frame::Kind::data)
      drop_data(event.node, event.frame->data, DropReason::sim_end);
  }

  if (scenario_.variant == Variant::mdc_mpolsr) {
    // Originals whose group never decoded at the destination.
    const std::uint64_t undecoded = report_.data_sent - report_.data_delivered;
    if (undecoded > 0) report_.drop_reasons[DropReason::mdc_undecoded] = undecoded;
  }

  for (const auto& node : nodes_) report_.per_node_forwarded[node.id] = node.forwarded_data;
}

}  // namespace

MetricsReport run_simulation(const Scenario& scenario, std::ostream* trace) {
  Simulation simulation(scenario, trace);
  return simulation.run();
}

}  // namespace mpolsr
