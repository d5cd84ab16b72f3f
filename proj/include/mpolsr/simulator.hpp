// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

#include "mpolsr/metrics.hpp"
#include "mpolsr/rng.hpp"
#include "mpolsr/scenario.hpp"

namespace mpolsr {

/// Unit-disk radio: receivable iff the Euclidean distance is at most
/// range_m, boundary inclusive. Symmetric by construction.
bool in_range(double ax, double ay, double bx, double by, double range_m);

/// Transmission time of one frame, exact.
SimTime service_time(std::size_t frame_bytes, std::int64_t bandwidth_bps);

struct MobilityState {
  double x = 0;
  double y = 0;
  double waypoint_x = 0;
  double waypoint_y = 0;
  double speed = 0;
  bool paused = true;
  SimTime pause_until{0};
};

/// One random-waypoint step of length dt: a node whose pause has ended
/// draws a fresh waypoint and speed, a moving node advances along its
/// segment and starts pausing when it arrives.
void mobility_step(MobilityState& node, SimTime now, SimTime dt, double area_width, double area_height,
                   double v_min, double v_max, SimTime pause, DeterministicRng& rng);

/// Runs one scenario to completion and returns its metrics. The whole run
/// is a pure function of the Scenario: one seeded generator, strict
/// (time, ordinal) event order, no wall clock. When `trace` is given, one
/// line per traced event is written (see README for the format).
MetricsReport run_simulation(const Scenario& scenario, std::ostream* trace = nullptr);

}  // namespace mpolsr
