// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpolsr/scenario.hpp"

namespace mpolsr {

/// One scenario of a sweep grid: the base with variant, speed ceiling and
/// seed substituted (the speed floor is clamped down when needed).
Scenario scenario_for_run(const Scenario& base, Variant variant, double max_speed, std::uint64_t seed);

/// Runs the whole (variant, speed, seed) grid and returns the CSV text,
/// header included. Rows are ordered variant, speed, seed ascending no
/// matter how the lists were given; duplicates collapse.
std::string run_batch(const Scenario& base, std::vector<Variant> variants, std::vector<double> speeds,
                      std::vector<std::uint64_t> seeds);

}  // namespace mpolsr
