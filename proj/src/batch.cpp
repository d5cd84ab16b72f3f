// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#include "mpolsr/batch.hpp"

#include <algorithm>

#include "mpolsr/metrics.hpp"
#include "mpolsr/simulator.hpp"

namespace mpolsr {

Scenario scenario_for_run(const Scenario& base, Variant variant, double max_speed, std::uint64_t seed) {
  Scenario scenario = base;
  scenario.variant = variant;
  scenario.v_max_mps = max_speed;
  scenario.v_min_mps = std::min(scenario.v_min_mps, max_speed);
  scenario.seed = seed;
  return scenario;
}

std::string run_batch(const Scenario& base, std::vector<Variant> variants, std::vector<double> speeds,
                      std::vector<std::uint64_t> seeds) {
  const auto by_name = [](Variant a, Variant b) {
    return std::string(variant_name(a)) < std::string(variant_name(b));
  };
  std::sort(variants.begin(), variants.end(), by_name);
  variants.erase(std::unique(variants.begin(), variants.end()), variants.end());
  std::sort(speeds.begin(), speeds.end());
  speeds.erase(std::unique(speeds.begin(), speeds.end()), speeds.end());
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  std::string csv = csv_header() + "\n";
  for (Variant variant : variants) {
    for (double speed : speeds) {
      for (std::uint64_t seed : seeds) {
        const MetricsReport report = run_simulation(scenario_for_run(base, variant, speed, seed));
        csv += csv_row(variant_name(variant), speed, seed, report) + "\n";
      }
    }
  }
  return csv;
}

}  // namespace mpolsr
