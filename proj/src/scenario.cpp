// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#include "mpolsr/scenario.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace mpolsr {

const char* variant_name(Variant variant) {
  switch (variant) {
    case Variant::olsr: return "olsr";
    case Variant::olsr_fb: return "olsr-fb";
    case Variant::sr_mpolsr: return "sr-mpolsr";
    case Variant::re_mpolsr: return "re-mpolsr";
    case Variant::mdc_mpolsr: return "mdc-mpolsr";
  }
  return "unknown";
}

Variant variant_from_name(const std::string& name) {
  if (name == "olsr") return Variant::olsr;
  if (name == "olsr-fb") return Variant::olsr_fb;
  if (name == "sr-mpolsr") return Variant::sr_mpolsr;
  if (name == "re-mpolsr") return Variant::re_mpolsr;
  if (name == "mdc-mpolsr") return Variant::mdc_mpolsr;
  throw InvalidScenario("unknown variant '" + name +
                        "' (expected olsr, olsr-fb, sr-mpolsr, re-mpolsr or mdc-mpolsr)");
}

bool variant_has_feedback(Variant variant) { return variant != Variant::olsr; }

bool variant_is_multipath(Variant variant) {
  return variant == Variant::sr_mpolsr || variant == Variant::re_mpolsr || variant == Variant::mdc_mpolsr;
}

bool variant_has_recovery(Variant variant) {
  return variant == Variant::re_mpolsr || variant == Variant::mdc_mpolsr;
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

// Exact decimal/fraction parse: "2", "0.1", "3/10".
Rational parse_rational(const std::string& text, const std::string& where) {
  try {
    if (const auto slash = text.find('/'); slash != std::string::npos) {
      return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(text));
    const std::string whole = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if (frac.size() > 9) throw std::out_of_range("too many fractional digits");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::int64_t sign = (!whole.empty() && whole[0] == '-') ? -1 : 1;
    const std::int64_t whole_value = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
    const std::int64_t frac_value = frac.empty() ? 0 : std::stoll(frac);
    return Rational(whole_value * den + sign * frac_value, den);
  } catch (const std::exception&) {
    throw InvalidScenario(where + ": cannot parse '" + text + "' as a rational number");
  }
}

std::int64_t parse_int(const std::string& text, const std::string& where) {
  try {
    std::size_t pos = 0;
    const std::int64_t value = std::stoll(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw InvalidScenario(where + ": cannot parse '" + text + "' as an integer");
  }
}

double parse_double(const std::string& text, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double value = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw InvalidScenario(where + ": cannot parse '" + text + "' as a number");
  }
}

// "0>9;3>7"
std::vector<std::pair<int, int>> parse_pairs(const std::string& text, const std::string& where) {
  std::vector<std::pair<int, int>> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto sep = item.find('>');
    if (sep == std::string::npos) throw InvalidScenario(where + ": flow pair '" + item + "' needs the form src>dst");
    out.emplace_back(static_cast<int>(parse_int(trim(item.substr(0, sep)), where)),
                     static_cast<int>(parse_int(trim(item.substr(sep + 1)), where)));
  }
  return out;
}

}  // namespace

void Scenario::validate() const {
  const auto fail = [](const std::string& msg) { throw InvalidScenario("invalid scenario: " + msg); };
  if (area_width_m <= 0 || area_height_m <= 0) fail("area dimensions must be positive");
  if (node_count < 1) fail("node_count must be >= 1");
  if (!(warmup_s < duration_s)) fail("warmup_s must be strictly below duration_s");
  if (tx_range_m <= 0) fail("tx_range_m must be positive");
  if (bandwidth_bps <= 0) fail("bandwidth_bps must be positive");
  if (hello_interval_s <= SimTime(0) || tc_interval_s <= SimTime(0)) fail("message intervals must be positive");
  if (neighbor_hold_multiplier < 1 || topology_hold_multiplier < 1) fail("hold multipliers must be >= 1");
  if (n_routes < 1) fail("n_routes must be >= 1");
  if (fp_mult < Rational(1) || fe_mult < Rational(1)) fail("fp_mult and fe_mult must be >= 1");
  if (ttl < 1) fail("ttl must be >= 1");
  if (mdc_n < 1 || mdc_m < 1 || mdc_m > mdc_n) fail("mdc parameters must satisfy 0 < M <= N");
  if (mdc_group_size < 1) fail("mdc_group_size must be >= 1");
  if (cbr_flows < 0) fail("cbr_flows must be >= 0");
  if (cbr_rate_pps <= Rational(0)) fail("cbr_rate_pps must be positive");
  if (cbr_payload_bytes == 0) fail("cbr_payload_bytes must be positive");
  if (v_min_mps < 0 || v_max_mps < 0 || v_min_mps > v_max_mps) fail("need 0 <= v_min_mps <= v_max_mps");
  if (pause_s < SimTime(0)) fail("pause_s must be >= 0");
  if (mobility_tick_s <= SimTime(0)) fail("mobility_tick_s must be positive");
  if (mac_retry_factor < 1) fail("mac_retry_factor must be >= 1");
  if (expiry_sweep_s <= SimTime(0)) fail("expiry_sweep_s must be positive");
  for (const auto& [src, dst] : cbr_pairs) {
    if (src < 0 || src >= node_count || dst < 0 || dst >= node_count || src == dst)
      fail("cbr_pairs entries must name two distinct nodes in range");
  }
}

Scenario parse_scenario(std::istream& in, const std::string& origin) {
  Scenario scenario;
  using Setter = std::function<void(Scenario&, const std::string&, const std::string&)>;
  static const std::map<std::string, Setter> setters = {
      {"area_width_m", [](Scenario& s, const std::string& v, const std::string& w) { s.area_width_m = parse_double(v, w); }},
      {"area_height_m", [](Scenario& s, const std::string& v, const std::string& w) { s.area_height_m = parse_double(v, w); }},
      {"node_count", [](Scenario& s, const std::string& v, const std::string& w) { s.node_count = static_cast<int>(parse_int(v, w)); }},
      {"duration_s", [](Scenario& s, const std::string& v, const std::string& w) { s.duration_s = parse_rational(v, w); }},
      {"warmup_s", [](Scenario& s, const std::string& v, const std::string& w) { s.warmup_s = parse_rational(v, w); }},
      {"tx_range_m", [](Scenario& s, const std::string& v, const std::string& w) { s.tx_range_m = parse_double(v, w); }},
      {"bandwidth_bps", [](Scenario& s, const std::string& v, const std::string& w) { s.bandwidth_bps = parse_int(v, w); }},
      {"hello_interval_s", [](Scenario& s, const std::string& v, const std::string& w) { s.hello_interval_s = parse_rational(v, w); }},
      {"tc_interval_s", [](Scenario& s, const std::string& v, const std::string& w) { s.tc_interval_s = parse_rational(v, w); }},
      {"neighbor_hold_multiplier", [](Scenario& s, const std::string& v, const std::string& w) { s.neighbor_hold_multiplier = static_cast<int>(parse_int(v, w)); }},
      {"topology_hold_multiplier", [](Scenario& s, const std::string& v, const std::string& w) { s.topology_hold_multiplier = static_cast<int>(parse_int(v, w)); }},
      {"variant", [](Scenario& s, const std::string& v, const std::string&) { s.variant = variant_from_name(v); }},
      {"n_routes", [](Scenario& s, const std::string& v, const std::string& w) { s.n_routes = static_cast<int>(parse_int(v, w)); }},
      {"fp_mult", [](Scenario& s, const std::string& v, const std::string& w) { s.fp_mult = parse_rational(v, w); }},
      {"fe_mult", [](Scenario& s, const std::string& v, const std::string& w) { s.fe_mult = parse_rational(v, w); }},
      {"recovery_cap", [](Scenario& s, const std::string& v, const std::string& w) { s.recovery_cap = static_cast<std::uint32_t>(parse_int(v, w)); }},
      {"ttl", [](Scenario& s, const std::string& v, const std::string& w) { s.ttl = static_cast<int>(parse_int(v, w)); }},
      {"mdc_n", [](Scenario& s, const std::string& v, const std::string& w) { s.mdc_n = static_cast<int>(parse_int(v, w)); }},
      {"mdc_m", [](Scenario& s, const std::string& v, const std::string& w) { s.mdc_m = static_cast<int>(parse_int(v, w)); }},
      {"mdc_group_size", [](Scenario& s, const std::string& v, const std::string& w) { s.mdc_group_size = static_cast<int>(parse_int(v, w)); }},
      {"cbr_flows", [](Scenario& s, const std::string& v, const std::string& w) { s.cbr_flows = static_cast<int>(parse_int(v, w)); }},
      {"cbr_rate_pps", [](Scenario& s, const std::string& v, const std::string& w) { s.cbr_rate_pps = parse_rational(v, w); }},
      {"cbr_payload_bytes", [](Scenario& s, const std::string& v, const std::string& w) { s.cbr_payload_bytes = static_cast<std::size_t>(parse_int(v, w)); }},
      {"cbr_max_packets", [](Scenario& s, const std::string& v, const std::string& w) { s.cbr_max_packets = static_cast<std::uint64_t>(parse_int(v, w)); }},
      {"cbr_stop_s", [](Scenario& s, const std::string& v, const std::string& w) { s.cbr_stop_s = parse_rational(v, w); }},
      {"cbr_pairs", [](Scenario& s, const std::string& v, const std::string& w) { s.cbr_pairs = parse_pairs(v, w); }},
      {"v_min_mps", [](Scenario& s, const std::string& v, const std::string& w) { s.v_min_mps = parse_double(v, w); }},
      {"v_max_mps", [](Scenario& s, const std::string& v, const std::string& w) { s.v_max_mps = parse_double(v, w); }},
      {"pause_s", [](Scenario& s, const std::string& v, const std::string& w) { s.pause_s = parse_rational(v, w); }},
      {"mobility_tick_s", [](Scenario& s, const std::string& v, const std::string& w) { s.mobility_tick_s = parse_rational(v, w); }},
      {"placement", [](Scenario& s, const std::string& v, const std::string& w) {
         if (v == "uniform") s.placement = Scenario::Placement::uniform;
         else if (v == "line") s.placement = Scenario::Placement::line;
         else throw InvalidScenario(w + ": placement must be uniform or line");
       }},
      {"mac_overhead_bytes", [](Scenario& s, const std::string& v, const std::string& w) { s.mac_overhead_bytes = static_cast<std::size_t>(parse_int(v, w)); }},
      {"mac_retry_factor", [](Scenario& s, const std::string& v, const std::string& w) { s.mac_retry_factor = static_cast<int>(parse_int(v, w)); }},
      {"expiry_sweep_s", [](Scenario& s, const std::string& v, const std::string& w) { s.expiry_sweep_s = parse_rational(v, w); }},
      {"seed", [](Scenario& s, const std::string& v, const std::string& w) { s.seed = static_cast<std::uint64_t>(parse_int(v, w)); }},
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = origin + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidScenario(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw InvalidScenario(where + ": unknown key '" + key + "'");
    it->second(scenario, value, where);
  }
  scenario.validate();
  return scenario;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidScenario("cannot open scenario file '" + path + "'");
  return parse_scenario(in, path);
}

}  // namespace mpolsr
