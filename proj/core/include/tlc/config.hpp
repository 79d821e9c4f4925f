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

// Run configuration files.
//
// INI syntax: `[section]` headers, `key = value` lines, `;` or `#` comments.
// Vectors are comma-separated ("2, 6"); lists of points separate entries
// with semicolons ("10, 1; 9, 10"). Sections and keys:
//
//   [run]        name, scenario, output_dir, jobs
//   [simulation] mean_interarrival | arrival_rate, departure_rate, thresholds,
//                theta_min, theta_max, weights, switches, horizon, seed, mode,
//                rate_window, departures, initial_green, initial_queue,
//                rate_schedule ("t a1 a2; t a1 a2; ...")
//   [estimator]  check_invariants, and the discrete-path rules gamma_margin,
//                green_bursts_empty, phase_shift (none | terminal |
//                time_average); fluid paths always use the plain equations
//   [optimizer]  rho0, decay, kappa, s_min, max_iterations, tolerance, window,
//                replications, seed0, s0, evaluation_replications,
//                evaluation_seed
//   [surface]    s1, s2 (inclusive "lo, hi"), step, replications, seed
//
// Missing keys keep their defaults; unknown sections or keys are errors.

#ifndef TLC_CONFIG_HPP_
#define TLC_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tlc/experiments.hpp"
#include "tlc/ipa.hpp"
#include "tlc/optimizer.hpp"
#include "tlc/sim.hpp"

namespace tlc {

struct RunConfig {
  std::string name = "custom";
  /// Built-in scenario whose reference values reports are compared with;
  /// empty for none.
  std::string scenario;
  std::string output_dir = "out";
  unsigned jobs = 1;

  SimConfig sim;
  EstimatorOptions estimator{.check_invariants = false, .keep_contributions = false};

  StepRule rule;
  std::uint64_t seed0 = 1;
  std::vector<ThresholdVector> s0;
  int evaluation_replications = 10;
  std::uint64_t evaluation_seed = 1000000;

  GridSpec grid;
  int surface_replications = 10;
  std::uint64_t surface_seed = 1;

  /// Validates every section; throws ConfigError.
  void validate() const;
  OptimizeOptions optimize_options() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws ConfigError naming the offending section/key or line.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical text form; parse_run_config(emit_run_config(c)) == c.
std::string emit_run_config(const RunConfig& config);

/// 64-bit FNV-1a of the canonical text. The output directory and the
/// worker count do not change results and are left out.
std::uint64_t config_hash(const RunConfig& config);
std::string hash_hex(std::uint64_t hash);

/// Configuration of a built-in scenario; throws ConfigError if unknown.
RunConfig builtin_run_config(std::string_view scenario);

/// A file path if one exists, otherwise a built-in scenario name.
RunConfig resolve_run_config(const std::string& name_or_path);

}  // namespace tlc

#endif  // TLC_CONFIG_HPP_
