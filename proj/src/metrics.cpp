// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#include "mpolsr/metrics.hpp"

#include <cmath>
#include <cstdio>

namespace mpolsr {

double delivery_ratio(const MetricsReport& report) {
  if (report.data_sent == 0) throw NoTraffic("delivery ratio undefined: no data packets were sent");
  return static_cast<double>(report.data_delivered) / static_cast<double>(report.data_sent);
}

double routing_load(const MetricsReport& report) {
  if (report.data_delivered == 0) throw NothingDelivered("routing load undefined: nothing was delivered");
  return static_cast<double>(report.control_transmissions) / static_cast<double>(report.data_delivered);
}

double average_delay(const MetricsReport& report) {
  if (report.per_packet_delay.empty()) throw NothingDelivered("average delay undefined: nothing was delivered");
  double sum = 0.0;
  for (double d : report.per_packet_delay) sum += d;
  return sum / static_cast<double>(report.per_packet_delay.size());
}

double cov_load(const MetricsReport& report) {
  if (report.per_node_forwarded.empty()) throw ZeroMean("load CoV undefined: no nodes in the report");
  double sum = 0.0;
  for (const auto& [node, count] : report.per_node_forwarded) sum += static_cast<double>(count);
  const double mean = sum / static_cast<double>(report.per_node_forwarded.size());
  if (mean == 0.0) throw ZeroMean("load CoV undefined: no node forwarded any data packet");

  double variance = 0.0;
  for (const auto& [node, count] : report.per_node_forwarded) {
    const double diff = static_cast<double>(count) - mean;
    variance += diff * diff;
  }
  variance /= static_cast<double>(report.per_node_forwarded.size());  // population variance
  return std::sqrt(variance) / mean;
}

namespace {

std::string format_fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

}  // namespace

std::string csv_header() {
  return "variant,max_speed_mps,seed,data_sent,data_delivered,delivery_ratio,routing_load,"
         "avg_delay_ms,cov_load,drops_no_route,drops_link,drops_recovery_limit";
}

std::string csv_row(const std::string& variant, double max_speed_mps, std::uint64_t seed,
                    const MetricsReport& report) {
  const auto guarded = [&](auto&& metric) -> std::string {
    try {
      return format_fixed(metric());
    } catch (const std::runtime_error&) {
      return "nan";
    }
  };
  std::string row = variant;
  row += ',' + format_fixed(max_speed_mps);
  row += ',' + std::to_string(seed);
  row += ',' + std::to_string(report.data_sent);
  row += ',' + std::to_string(report.data_delivered);
  row += ',' + guarded([&] { return delivery_ratio(report); });
  row += ',' + guarded([&] { return routing_load(report); });
  row += ',' + guarded([&] { return average_delay(report) * 1000.0; });
  row += ',' + guarded([&] { return cov_load(report); });
  row += ',' + std::to_string(report.drops(DropReason::no_route));
  row += ',' + std::to_string(report.drops(DropReason::link));
  row += ',' + std::to_string(report.drops(DropReason::recovery_limit));
  return row;
}

}  // namespace mpolsr
