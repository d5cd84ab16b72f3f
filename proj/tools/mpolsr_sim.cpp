// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: run one scenario, or sweep a grid of
// (variant, max speed, seed) combinations into a CSV.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mpolsr/batch.hpp"
#include "mpolsr/metrics.hpp"
#include "mpolsr/scenario.hpp"
#include "mpolsr/simulator.hpp"

namespace {

int run_simulate(const std::string& scenario_path, const std::optional<std::string>& variant,
                 const std::optional<std::uint64_t>& seed, const std::optional<double>& max_speed,
                 const std::optional<std::string>& trace_path) {
  mpolsr::Scenario scenario = mpolsr::load_scenario_file(scenario_path);
  if (variant) scenario.variant = mpolsr::variant_from_name(*variant);
  if (seed) scenario.seed = *seed;
  if (max_speed) {
    scenario.v_max_mps = *max_speed;
    scenario.v_min_mps = std::min(scenario.v_min_mps, *max_speed);
  }
  scenario.validate();

  std::ofstream trace_file;
  std::ostream* trace = nullptr;
  if (trace_path) {
    trace_file.open(*trace_path);
    if (!trace_file) {
      std::cerr << "cannot open trace file '" << *trace_path << "'\n";
      return 1;
    }
    trace = &trace_file;
  }

  const mpolsr::MetricsReport report = mpolsr::run_simulation(scenario, trace);
  std::cout << mpolsr::csv_header() << '\n'
            << mpolsr::csv_row(mpolsr::variant_name(scenario.variant), scenario.v_max_mps, scenario.seed, report)
            << '\n';
  return 0;
}

int run_sweep(const std::string& scenario_path, const std::vector<std::string>& variants,
              const std::vector<double>& speeds, const std::vector<std::uint64_t>& seeds,
              const std::string& out_path) {
  const mpolsr::Scenario base = mpolsr::load_scenario_file(scenario_path);
  std::vector<mpolsr::Variant> parsed;
  parsed.reserve(variants.size());
  for (const std::string& name : variants) parsed.push_back(mpolsr::variant_from_name(name));

  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot open output file '" << out_path << "'\n";
    return 1;
  }
  out << mpolsr::run_batch(base, parsed, speeds, seeds);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MP-OLSR multipath routing simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::optional<std::string> variant;
  std::optional<std::uint64_t> seed;
  std::optional<double> max_speed;
  std::optional<std::string> trace_path;

  CLI::App* simulate = app.add_subcommand("simulate", "run one scenario and print its CSV row");
  simulate->add_option("--scenario", scenario_path, "scenario file")->required();
  simulate->add_option("--variant", variant, "protocol variant override");
  simulate->add_option("--seed", seed, "seed override");
  simulate->add_option("--max-speed", max_speed, "maximum node speed override (m/s)");
  simulate->add_option("--trace", trace_path, "write the event trace to this file");

  std::string sweep_scenario;
  std::vector<std::string> variants;
  std::vector<double> speeds;
  std::vector<std::uint64_t> seeds;
  std::string out_path;

  CLI::App* sweep = app.add_subcommand("sweep", "run a (variant, speed, seed) grid into a CSV");
  sweep->add_option("--scenario", sweep_scenario, "scenario file")->required();
  sweep->add_option("--variants", variants, "protocol variants")->required()->delimiter(',');
  sweep->add_option("--speeds", speeds, "maximum node speeds (m/s)")->required()->delimiter(',');
  sweep->add_option("--seeds", seeds, "seeds")->required()->delimiter(',');
  sweep->add_option("--out", out_path, "output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return run_simulate(scenario_path, variant, seed, max_speed, trace_path);
    if (sweep->parsed()) return run_sweep(sweep_scenario, variants, speeds, seeds, out_path);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 1;
  }
  return 0;
}
