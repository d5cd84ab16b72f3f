// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpolsr/graph.hpp"
#include "mpolsr/routing.hpp"

namespace mpolsr {

struct NoTraffic : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NothingDelivered : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroMean : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Counters of one finished run. `per_node_forwarded` covers every node in
/// the scenario, zeros included; `control_transmissions` counts each HELLO
/// or TC actually put on the air, originations and floods alike.
struct MetricsReport {
  std::uint64_t data_sent = 0;
  std::uint64_t data_delivered = 0;
  std::uint64_t control_transmissions = 0;
  std::vector<double> per_packet_delay;  // seconds, one entry per delivered packet
  std::map<NodeId, std::uint64_t> per_node_forwarded;
  std::map<DropReason, std::uint64_t> drop_reasons;

  [[nodiscard]] std::uint64_t drops(DropReason reason) const {
    auto it = drop_reasons.find(reason);
    return it == drop_reasons.end() ? 0 : it->second;
  }
  [[nodiscard]] std::uint64_t total_drops() const {
    std::uint64_t sum = 0;
    for (const auto& [reason, count] : drop_reasons) sum += count;
    return sum;
  }
};

/// data_delivered / data_sent. Under the MDC variant "delivered" means the
/// packet's group decoded at the destination.
double delivery_ratio(const MetricsReport& report);

/// Control transmissions per delivered data packet.
double routing_load(const MetricsReport& report);

/// Arithmetic mean of the surviving packets' end-to-end delays, seconds.
double average_delay(const MetricsReport& report);

/// Coefficient of variation (population std dev / mean) of the per-node
/// forwarded-data counts; lower means better load balancing.
double cov_load(const MetricsReport& report);

/// CSV header + row formatting shared by the CLI and the batch driver.
/// Columns: variant, max_speed_mps, seed, data_sent, data_delivered,
/// delivery_ratio, routing_load, avg_delay_ms, cov_load, drops_no_route,
/// drops_link, drops_recovery_limit. Metrics that are undefined for the
/// run (nothing sent, nothing delivered) print as nan.
std::string csv_header();
std::string csv_row(const std::string& variant, double max_speed_mps, std::uint64_t seed,
                    const MetricsReport& report);

}  // namespace mpolsr
