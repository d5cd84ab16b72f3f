// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mpolsr/rational.hpp"

namespace mpolsr {

struct InvalidScenario : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Variant : std::uint8_t { olsr, olsr_fb, sr_mpolsr, re_mpolsr, mdc_mpolsr };

const char* variant_name(Variant variant);
Variant variant_from_name(const std::string& name);

/// True for every variant in which the MAC reports failed unicast
/// transmissions back to the routing layer.
bool variant_has_feedback(Variant variant);
bool variant_is_multipath(Variant variant);
bool variant_has_recovery(Variant variant);

/// Full configuration of one simulation run. Defaults follow the OLSR
/// timing conventions (HELLO 2 s, TC 5 s, hold = 3 intervals); everything
/// is overridable through the scenario file.
struct Scenario {
  double area_width_m = 1000.0;
  double area_height_m = 1000.0;
  int node_count = 50;
  SimTime duration_s{200};
  SimTime warmup_s{20};
  double tx_range_m = 250.0;
  std::int64_t bandwidth_bps = 11'000'000;

  SimTime hello_interval_s{2};
  SimTime tc_interval_s{5};
  int neighbor_hold_multiplier = 3;   // hold = multiplier * hello interval
  int topology_hold_multiplier = 3;   // hold = multiplier * tc interval

  Variant variant = Variant::re_mpolsr;
  int n_routes = 3;
  Rational fp_mult{2};
  Rational fe_mult{2};
  std::uint32_t recovery_cap = 3;
  int ttl = 64;

  int mdc_n = 4;
  int mdc_m = 2;
  int mdc_group_size = 2;

  int cbr_flows = 30;
  Rational cbr_rate_pps{10};
  std::size_t cbr_payload_bytes = 512;
  std::uint64_t cbr_max_packets = 0;  // 0 = keep sending until cbr_stop
  SimTime cbr_stop_s{0};              // 0 = duration
  std::vector<std::pair<int, int>> cbr_pairs;  // empty = drawn from the seed

  double v_min_mps = 1.0;
  double v_max_mps = 10.0;
  SimTime pause_s{0};
  SimTime mobility_tick_s{1, 10};
  enum class Placement : std::uint8_t { uniform, line } placement = Placement::uniform;

  std::size_t mac_overhead_bytes = 24;
  int mac_retry_factor = 4;  // airtime multiplier burned on a failed unicast
  SimTime expiry_sweep_s{1, 2};

  std::uint64_t seed = 1;

  [[nodiscard]] SimTime neighbor_hold() const { return hello_interval_s * Rational(neighbor_hold_multiplier); }
  [[nodiscard]] SimTime topology_hold() const { return tc_interval_s * Rational(topology_hold_multiplier); }
  [[nodiscard]] SimTime traffic_stop() const { return cbr_stop_s == SimTime(0) ? duration_s : cbr_stop_s; }

  /// Throws InvalidScenario naming the offending field.
  void validate() const;
};

/// Parses line-oriented `key = value` text. `#` starts a comment; unknown
/// keys are errors that name the line.
Scenario parse_scenario(std::istream& in, const std::string& origin = "scenario");
Scenario load_scenario_file(const std::string& path);

}  // namespace mpolsr
