// Copyright 2026 The tlc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tlc/config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "tlc/errors.hpp"

namespace tlc {
namespace {

namespace pt = boost::property_tree;

[[noreturn]] void bad(std::string_view section, std::string_view key, const std::string& what) {
  std::ostringstream os;
  os << "[" << section << "] " << key << ": " << what;
  throw ConfigError(os.str());
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt(const Vec2& v) { return fmt(v[0]) + ", " + fmt(v[1]); }

double to_double(std::string_view section, std::string_view key, std::string text) {
  boost::algorithm::trim(text);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    bad(section, key, "expected a number, got '" + text + "'");
  }
  return v;
}

template <class Int>
Int to_int(std::string_view section, std::string_view key, std::string text) {
  boost::algorithm::trim(text);
  Int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    bad(section, key, "expected an integer, got '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, const char* sep) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, text, boost::algorithm::is_any_of(sep));
  for (std::string& p : parts) boost::algorithm::trim(p);
  return parts;
}

Vec2 to_vec2(std::string_view section, std::string_view key, const std::string& text) {
  const std::vector<std::string> parts = split(text, ",");
  if (parts.size() != 2) bad(section, key, "expected two comma-separated numbers");
  return {to_double(section, key, parts[0]), to_double(section, key, parts[1])};
}

bool to_bool(std::string_view section, std::string_view key, std::string text) {
  boost::algorithm::trim(text);
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  bad(section, key, "expected true or false, got '" + text + "'");
}

ThresholdVector to_thresholds(std::string_view section, std::string_view key,
                              const std::string& text) {
  try {
    return ThresholdVector(to_vec2(section, key, text));
  } catch (const ConfigError& e) {
    bad(section, key, e.what());
  }
}

// Reads one section, handing each key to `handle` and rejecting leftovers.
template <class Handler>
void each_key(const pt::ptree& tree, const std::string& section,
              const std::set<std::string>& known, Handler handle) {
  const auto it = tree.find(section);
  if (it == tree.not_found()) return;
  for (const auto& [key, node] : it->second) {
    if (!known.count(key)) bad(section, key, "unknown key");
    handle(key, node.data());
  }
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

void RunConfig::validate() const {
  sim.validate();
  rule.validate();
  grid.validate(rule.s_min);
  if (jobs < 1) throw ConfigError("[run] jobs must be at least 1");
  if (evaluation_replications < 1) {
    throw ConfigError("[optimizer] evaluation_replications must be at least 1");
  }
  if (surface_replications < 1) throw ConfigError("[surface] replications must be at least 1");
  if (!(estimator.discrete.gamma_margin >= 0.0)) {
    throw ConfigError("[estimator] gamma_margin must be >= 0");
  }
  for (const ThresholdVector& s : s0) {
    if (s[0] < rule.s_min || s[1] < rule.s_min) {
      throw ConfigError("[optimizer] s0 lies below s_min");
    }
  }
}

OptimizeOptions RunConfig::optimize_options() const {
  OptimizeOptions o;
  o.estimator = estimator;
  o.evaluation_replications = evaluation_replications;
  o.evaluation_seed = evaluation_seed;
  o.jobs = jobs;
  return o;
}

RunConfig parse_run_config(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    std::ostringstream os;
    os << "line " << e.line() << ": " << e.message();
    throw ConfigError(os.str());
  }
  const std::set<std::string> sections{"run", "simulation", "estimator", "optimizer", "surface"};
  for (const auto& [name, node] : tree) {
    if (!sections.count(name)) throw ConfigError("unknown section [" + name + "]");
    if (node.empty()) throw ConfigError("entry '" + name + "' outside any section");
  }

  RunConfig c;
  each_key(tree, "run", {"name", "scenario", "output_dir", "jobs"},
           [&](const std::string& k, const std::string& v) {
             if (k == "name") c.name = v;
             if (k == "scenario") c.scenario = v;
             if (k == "output_dir") c.output_dir = v;
             if (k == "jobs") c.jobs = to_int<unsigned>("run", k, v);
           });

  const char* sim = "simulation";
  bool have_rate = false;
  bool have_mean = false;
  each_key(tree, sim,
           {"mean_interarrival", "arrival_rate", "departure_rate", "thresholds", "theta_min",
            "theta_max", "weights", "switches", "horizon", "seed", "mode", "rate_window",
            "departures", "initial_green", "initial_queue", "rate_schedule"},
           [&](const std::string& k, const std::string& v) {
             SimConfig& s = c.sim;
             if (k == "mean_interarrival") {
               have_mean = true;
               Vec2 m{};
               const std::vector<std::string> parts = split(v, ",");
               if (parts.size() != 2) bad(sim, k, "expected two comma-separated numbers");
               for (std::size_t n = 0; n < 2; ++n) {
                 m[n] = parts[n] == "inf" ? std::numeric_limits<double>::infinity()
                                          : to_double(sim, k, parts[n]);
               }
               try {
                 s.arrival_rate = rates_from_mean_interarrival(m);
               } catch (const ConfigError& e) {
                 bad(sim, k, e.what());
               }
             }
             if (k == "arrival_rate") {
               have_rate = true;
               s.arrival_rate = to_vec2(sim, k, v);
             }
             if (k == "departure_rate") s.departure_rate = to_double(sim, k, v);
             if (k == "thresholds") s.thresholds = to_thresholds(sim, k, v);
             if (k == "theta_min") s.cycles.theta_min = to_vec2(sim, k, v);
             if (k == "theta_max") s.cycles.theta_max = to_vec2(sim, k, v);
             if (k == "weights") s.weights = to_vec2(sim, k, v);
             if (k == "switches") s.stop.switches = to_int<std::int64_t>(sim, k, v);
             if (k == "horizon") s.stop.horizon = to_double(sim, k, v);
             if (k == "seed") s.seed = to_int<std::uint64_t>(sim, k, v);
             if (k == "mode") {
               if (v == "discrete") {
                 s.mode = SimMode::kDiscrete;
               } else if (v == "fluid") {
                 s.mode = SimMode::kFluid;
               } else {
                 bad(sim, k, "expected discrete or fluid");
               }
             }
             if (k == "rate_window") s.rate_window = to_double(sim, k, v);
             if (k == "departures") {
               if (v == "deterministic") {
                 s.departures = DepartureProcess::kDeterministic;
               } else if (v == "exponential") {
                 s.departures = DepartureProcess::kExponential;
               } else {
                 bad(sim, k, "expected deterministic or exponential");
               }
             }
             if (k == "initial_green") {
               const int g = to_int<int>(sim, k, v);
               if (g != 1 && g != 2) bad(sim, k, "expected 1 or 2");
               s.initial_green = road_at(static_cast<std::size_t>(g - 1));
             }
             if (k == "initial_queue") s.initial_queue = to_vec2(sim, k, v);
             if (k == "rate_schedule") {
               s.fluid_schedule.clear();
               if (!v.empty()) {
                 for (const std::string& entry : split(v, ";")) {
                   std::vector<std::string> f;
                   boost::algorithm::split(f, entry, boost::algorithm::is_space(),
                                           boost::algorithm::token_compress_on);
                   if (f.size() != 3) bad(sim, k, "each segment needs 'start a1 a2'");
                   s.fluid_schedule.push_back(
                       {to_double(sim, k, f[0]), {to_double(sim, k, f[1]), to_double(sim, k, f[2])}});
                 }
               }
             }
           });
  if (have_rate && have_mean) {
    bad(sim, "arrival_rate", "give either arrival_rate or mean_interarrival, not both");
  }

  each_key(tree, "estimator",
           {"check_invariants", "gamma_margin", "green_bursts_empty", "phase_shift"},
           [&](const std::string& k, const std::string& v) {
             EventRules& d = c.estimator.discrete;
             if (k == "check_invariants") c.estimator.check_invariants = to_bool("estimator", k, v);
             if (k == "gamma_margin") d.gamma_margin = to_double("estimator", k, v);
             if (k == "green_bursts_empty") d.green_bursts_empty = to_bool("estimator", k, v);
             if (k == "phase_shift") {
               if (v == "none") {
                 d.phase_shift = PhaseShift::kNone;
               } else if (v == "terminal") {
                 d.phase_shift = PhaseShift::kTerminal;
               } else if (v == "time_average") {
                 d.phase_shift = PhaseShift::kTimeAverage;
               } else {
                 bad("estimator", k, "expected none, terminal or time_average");
               }
             }
           });

  const char* opt = "optimizer";
  each_key(tree, opt,
           {"rho0", "decay", "kappa", "s_min", "max_iterations", "tolerance", "window",
            "replications", "seed0", "s0", "evaluation_replications", "evaluation_seed"},
           [&](const std::string& k, const std::string& v) {
             StepRule& r = c.rule;
             if (k == "rho0") r.rho0 = to_double(opt, k, v);
             if (k == "decay") {
               if (v == "harmonic") {
                 r.decay = StepDecay::kHarmonic;
               } else if (v == "constant") {
                 r.decay = StepDecay::kConstant;
               } else {
                 bad(opt, k, "expected harmonic or constant");
               }
             }
             if (k == "kappa") r.kappa = to_double(opt, k, v);
             if (k == "s_min") r.s_min = to_double(opt, k, v);
             if (k == "max_iterations") r.max_iterations = to_int<int>(opt, k, v);
             if (k == "tolerance") r.tolerance = to_double(opt, k, v);
             if (k == "window") r.window = to_int<int>(opt, k, v);
             if (k == "replications") r.replications = to_int<int>(opt, k, v);
             if (k == "seed0") c.seed0 = to_int<std::uint64_t>(opt, k, v);
             if (k == "s0") {
               c.s0.clear();
               if (!v.empty()) {
                 for (const std::string& p : split(v, ";")) c.s0.push_back(to_thresholds(opt, k, p));
               }
             }
             if (k == "evaluation_replications") {
               c.evaluation_replications = to_int<int>(opt, k, v);
             }
             if (k == "evaluation_seed") c.evaluation_seed = to_int<std::uint64_t>(opt, k, v);
           });

  each_key(tree, "surface", {"s1", "s2", "step", "replications", "seed"},
           [&](const std::string& k, const std::string& v) {
             if (k == "s1") {
               const Vec2 b = to_vec2("surface", k, v);
               c.grid.s1_lo = b[0];
               c.grid.s1_hi = b[1];
             }
             if (k == "s2") {
               const Vec2 b = to_vec2("surface", k, v);
               c.grid.s2_lo = b[0];
               c.grid.s2_hi = b[1];
             }
             if (k == "step") c.grid.step = to_double("surface", k, v);
             if (k == "replications") c.surface_replications = to_int<int>("surface", k, v);
             if (k == "seed") c.surface_seed = to_int<std::uint64_t>("surface", k, v);
           });

  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_run_config(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string emit_run_config(const RunConfig& c) {
  std::ostringstream os;
  const SimConfig& s = c.sim;
  os << "[run]\n"
     << "name = " << c.name << "\n"
     << "scenario = " << c.scenario << "\n"
     << "output_dir = " << c.output_dir << "\n"
     << "jobs = " << c.jobs << "\n\n";
  os << "[simulation]\n"
     << "arrival_rate = " << fmt(s.arrival_rate) << "\n"
     << "departure_rate = " << fmt(s.departure_rate) << "\n"
     << "thresholds = " << fmt(s.thresholds.values()) << "\n"
     << "theta_min = " << fmt(s.cycles.theta_min) << "\n"
     << "theta_max = " << fmt(s.cycles.theta_max) << "\n"
     << "weights = " << fmt(s.weights) << "\n"
     << "switches = " << s.stop.switches << "\n"
     << "horizon = " << fmt(s.stop.horizon) << "\n"
     << "seed = " << s.seed << "\n"
     << "mode = " << to_string(s.mode) << "\n"
     << "rate_window = " << fmt(s.rate_window) << "\n"
     << "departures = " << to_string(s.departures) << "\n"
     << "initial_green = " << number(s.initial_green) << "\n"
     << "initial_queue = " << fmt(s.initial_queue) << "\n"
     << "rate_schedule = ";
  for (std::size_t k = 0; k < s.fluid_schedule.size(); ++k) {
    const RateSegment& seg = s.fluid_schedule[k];
    os << (k ? "; " : "") << fmt(seg.start) << " " << fmt(seg.alpha[0]) << " "
       << fmt(seg.alpha[1]);
  }
  os << "\n\n";
  os << "[estimator]\n"
     << "check_invariants = " << (c.estimator.check_invariants ? "true" : "false") << "\n"
     << "gamma_margin = " << fmt(c.estimator.discrete.gamma_margin) << "\n"
     << "green_bursts_empty = " << (c.estimator.discrete.green_bursts_empty ? "true" : "false")
     << "\n"
     << "phase_shift = " << to_string(c.estimator.discrete.phase_shift) << "\n\n";
  const StepRule& r = c.rule;
  os << "[optimizer]\n"
     << "rho0 = " << fmt(r.rho0) << "\n"
     << "decay = " << to_string(r.decay) << "\n"
     << "kappa = " << fmt(r.kappa) << "\n"
     << "s_min = " << fmt(r.s_min) << "\n"
     << "max_iterations = " << r.max_iterations << "\n"
     << "tolerance = " << fmt(r.tolerance) << "\n"
     << "window = " << r.window << "\n"
     << "replications = " << r.replications << "\n"
     << "seed0 = " << c.seed0 << "\n"
     << "s0 = ";
  for (std::size_t k = 0; k < c.s0.size(); ++k) {
    os << (k ? "; " : "") << fmt(c.s0[k].values());
  }
  os << "\n"
     << "evaluation_replications = " << c.evaluation_replications << "\n"
     << "evaluation_seed = " << c.evaluation_seed << "\n\n";
  os << "[surface]\n"
     << "s1 = " << fmt(c.grid.s1_lo) << ", " << fmt(c.grid.s1_hi) << "\n"
     << "s2 = " << fmt(c.grid.s2_lo) << ", " << fmt(c.grid.s2_hi) << "\n"
     << "step = " << fmt(c.grid.step) << "\n"
     << "replications = " << c.surface_replications << "\n"
     << "seed = " << c.surface_seed << "\n";
  return os.str();
}

std::uint64_t config_hash(const RunConfig& config) {
  RunConfig c = config;
  c.output_dir.clear();
  c.jobs = 1;
  return fnv1a(emit_run_config(c));
}

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

RunConfig builtin_run_config(std::string_view scenario) {
  const ScenarioSpec spec = builtin_scenario(scenario);
  RunConfig c;
  c.name = spec.name;
  c.scenario = spec.name;
  c.sim = scenario_config(spec);
  c.sim.thresholds = spec.rows.front().s0;
  for (const ReferenceRow& row : spec.rows) c.s0.push_back(row.s0);
  return c;
}

RunConfig resolve_run_config(const std::string& name_or_path) {
  if (std::filesystem::is_regular_file(name_or_path)) return load_run_config(name_or_path);
  const std::vector<std::string> names = builtin_scenario_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
    return builtin_run_config(name_or_path);
  }
  throw ConfigError("no config file or built-in scenario named '" + name_or_path + "'");
}

}  // namespace tlc
