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

// Brute-force cost surfaces and the built-in benchmark scenarios.

#ifndef TLC_EXPERIMENTS_HPP_
#define TLC_EXPERIMENTS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tlc/model.hpp"
#include "tlc/optimizer.hpp"
#include "tlc/sim.hpp"

namespace tlc {

/// Rectangular threshold grid, inclusive bounds.
struct GridSpec {
  double s1_lo = 1.0;
  double s1_hi = 15.0;
  double s2_lo = 1.0;
  double s2_hi = 15.0;
  double step = 1.0;

  std::vector<double> s1_values() const;
  std::vector<double> s2_values() const;
  void validate(double s_min = 0.1) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct CostSurface {
  std::vector<double> s1_values;
  std::vector<double> s2_values;
  /// Row-major: index i * s2_values.size() + j holds (s1_values[i], s2_values[j]).
  std::vector<double> mean_cost;
  std::vector<double> std_error;
  int replications = 0;
  ThresholdVector argmin;
  double min_cost = 0.0;

  double at(std::size_t i, std::size_t j) const { return mean_cost[i * s2_values.size() + j]; }
};

/// Every grid point gets `replications` runs with seeds seed_base + r, so
/// neighbouring points share random numbers. Ties in the minimum go to the
/// first point in row-major order.
CostSurface brute_force_surface(const SimConfig& config, const GridSpec& grid,
                                int replications = 10, std::uint64_t seed_base = 1,
                                unsigned jobs = 1);

/// 100 * (J_initial - J_final) / J_initial. Throws DomainError unless
/// J_initial > 0.
double cost_reduction(double J_initial, double J_final);

/// Reference numbers for one starting point of a scenario. `source` names
/// the table they come from.
struct ReferenceRow {
  std::string source;
  ThresholdVector s0;
  std::optional<double> J0;
  Vec2 s_ipa{0.0, 0.0};
  double J_ipa = 0.0;
  double R = 0.0;
  Vec2 s_bf{0.0, 0.0};
  double J_bf = 0.0;
};

/// Reference comparison against the static and cycle-only methods.
struct MethodComparison {
  std::string source;
  double J1 = 0.0;
  double J2 = 0.0;
  double R2 = 0.0;
  double J3 = 0.0;
  double R3 = 0.0;
};

enum class CycleMode : std::uint8_t { kFixed, kOptimal };

std::string_view to_string(CycleMode mode);

struct ScenarioSpec {
  std::string name;
  Vec2 mean_interarrival{2.0, 6.0};
  CycleConfig cycles;
  CycleMode cycle_mode = CycleMode::kFixed;
  std::vector<ReferenceRow> rows;
  std::optional<MethodComparison> comparison;
};

ScenarioSpec scenario_a();
ScenarioSpec scenario_b();
ScenarioSpec table2_row1();
ScenarioSpec table2_row2();

/// Looks up a built-in scenario by name; throws ConfigError if unknown.
ScenarioSpec builtin_scenario(std::string_view name);
std::vector<std::string> builtin_scenario_names();

/// Discrete-mode template with the scenario's rates and cycles.
SimConfig scenario_config(const ScenarioSpec& spec, std::int64_t switches = 5000);

struct ScenarioRunOptions {
  StepRule rule;
  OptimizeOptions optimize;
  GridSpec grid;
  int surface_replications = 10;
  std::uint64_t surface_seed = 1;
  std::uint64_t seed0 = 1;
  bool with_surface = true;
};

struct ScenarioRowResult {
  ReferenceRow reference;
  OptRunRecord run;
  /// Mean cost of the surface point nearest to the terminal thresholds.
  std::optional<double> surface_cost_at_final;
};

struct ScenarioReport {
  ScenarioSpec spec;
  std::int64_t switches = 0;
  std::vector<ScenarioRowResult> rows;
  std::optional<CostSurface> surface;
  /// (J1 - J_final) / J1 against the stored static-method cost, per row.
  std::vector<double> r3;
};

ScenarioReport run_scenario(const ScenarioSpec& spec, const SimConfig& config,
                            const ScenarioRunOptions& options);

}  // namespace tlc

#endif  // TLC_EXPERIMENTS_HPP_
