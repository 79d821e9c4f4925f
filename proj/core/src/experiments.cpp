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

#include "tlc/experiments.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "parallel.hpp"
#include "tlc/errors.hpp"

namespace tlc {
namespace {

std::vector<double> grid_axis(double lo, double hi, double step) {
  std::vector<double> values;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  values.reserve(static_cast<std::size_t>(std::max(0L, count)));
  for (long k = 0; k < count; ++k) values.push_back(lo + static_cast<double>(k) * step);
  return values;
}

ReferenceRow row(std::string source, Vec2 s0, std::optional<double> J0, Vec2 s_ipa, double J_ipa,
                 double R, Vec2 s_bf, double J_bf) {
  return ReferenceRow{std::move(source), ThresholdVector(s0), J0, s_ipa, J_ipa, R, s_bf, J_bf};
}

CycleConfig cycles(double min1, double max1, double min2, double max2) {
  CycleConfig c;
  c.theta_min = {min1, min2};
  c.theta_max = {max1, max2};
  return c;
}

}  // namespace

std::vector<double> GridSpec::s1_values() const { return grid_axis(s1_lo, s1_hi, step); }
std::vector<double> GridSpec::s2_values() const { return grid_axis(s2_lo, s2_hi, step); }

void GridSpec::validate(double s_min) const {
  if (!(step > 0.0)) throw ConfigError("grid step must be positive");
  if (!(s1_lo <= s1_hi) || !(s2_lo <= s2_hi)) throw ConfigError("grid bounds are reversed");
  if (s1_lo < s_min || s2_lo < s_min) throw ConfigError("grid extends below s_min");
}

CostSurface brute_force_surface(const SimConfig& config, const GridSpec& grid, int replications,
                                std::uint64_t seed_base, unsigned jobs) {
  grid.validate();
  if (replications < 1) throw ConfigError("replications must be at least 1");
  config.validate();
  CostSurface surface;
  surface.s1_values = grid.s1_values();
  surface.s2_values = grid.s2_values();
  surface.replications = replications;
  const std::size_t n1 = surface.s1_values.size();
  const std::size_t n2 = surface.s2_values.size();
  const auto reps = static_cast<std::size_t>(replications);

  // One task per (point, replication) keeps all workers busy on small grids.
  std::vector<double> costs(n1 * n2 * reps);
  detail::parallel_for(costs.size(), jobs, [&](std::size_t k) {
    const std::size_t point = k / reps;
    const std::size_t r = k % reps;
    SimConfig c = config;
    c.thresholds = ThresholdVector(surface.s1_values[point / n2], surface.s2_values[point % n2]);
    c.seed = seed_base + r;
    costs[k] = sample_cost(simulate(c), c.weights);
  });

  surface.mean_cost.resize(n1 * n2);
  surface.std_error.resize(n1 * n2);
  surface.min_cost = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < n1 * n2; ++p) {
    long double sum = 0.0L;
    for (std::size_t r = 0; r < reps; ++r) sum += costs[p * reps + r];
    const long double mean = sum / reps;
    long double ss = 0.0L;
    for (std::size_t r = 0; r < reps; ++r) {
      const long double d = costs[p * reps + r] - mean;
      ss += d * d;
    }
    surface.mean_cost[p] = static_cast<double>(mean);
    surface.std_error[p] =
        reps > 1 ? static_cast<double>(std::sqrt(ss / (reps - 1) / reps)) : 0.0;
    if (surface.mean_cost[p] < surface.min_cost) {
      surface.min_cost = surface.mean_cost[p];
      surface.argmin = ThresholdVector(surface.s1_values[p / n2], surface.s2_values[p % n2]);
    }
  }
  return surface;
}

double cost_reduction(double J_initial, double J_final) {
  if (!(J_initial > 0.0)) {
    std::ostringstream os;
    os << "cost reduction needs a positive initial cost, got " << J_initial;
    throw DomainError(os.str());
  }
  return 100.0 * (J_initial - J_final) / J_initial;
}

std::string_view to_string(CycleMode mode) {
  return mode == CycleMode::kFixed ? "fixed_cycles" : "optimal_cycles";
}

ScenarioSpec scenario_a() {
  ScenarioSpec s;
  s.name = "scenarioA";
  s.mean_interarrival = {2.0, 6.0};
  s.cycles = cycles(10.0, 30.0, 10.0, 30.0);
  s.rows = {
      row("Table 1 row 1", {10.0, 1.0}, 12.8, {1.9, 3.7}, 4.3, 66.0, {1.0, 4.0}, 4.4),
      row("Table 1 row 2", {9.0, 10.0}, 6.2, {1.9, 3.7}, 4.3, 31.0, {1.0, 4.0}, 4.4),
  };
  return s;
}

ScenarioSpec scenario_b() {
  ScenarioSpec s;
  s.name = "scenarioB";
  s.mean_interarrival = {2.0, 3.0};
  s.cycles = cycles(10.0, 30.0, 10.0, 30.0);
  s.rows = {
      row("Table 1 row 3", {15.0, 3.0}, 18.9, {4.6, 5.1}, 7.9, 58.0, {5.0, 6.0}, 8.8),
      row("Table 1 row 4", {15.0, 15.0}, 13.1, {4.6, 5.1}, 7.9, 40.0, {5.0, 6.0}, 8.8),
  };
  return s;
}

ScenarioSpec table2_row1() {
  ScenarioSpec s;
  s.name = "table2_row1";
  s.mean_interarrival = {2.0, 3.0};
  s.cycles = cycles(10.2, 19.3, 10.1, 16.3);
  s.cycle_mode = CycleMode::kOptimal;
  s.rows = {row("Table 2 row 1", {8.0, 8.0}, std::nullopt, {2.8, 4.3}, 7.1, 15.0, {2.0, 5.0},
                7.2)};
  s.comparison = MethodComparison{"Table 3 row 1", 14.4, 8.4, 42.0, 7.1, 51.0};
  return s;
}

ScenarioSpec table2_row2() {
  ScenarioSpec s;
  s.name = "table2_row2";
  s.mean_interarrival = {1.7, 3.0};
  s.cycles = cycles(10.1, 20.1, 10.6, 11.9);
  s.cycle_mode = CycleMode::kOptimal;
  s.rows = {row("Table 2 row 2", {8.0, 8.0}, std::nullopt, {4.8, 6.1}, 14.9, 11.0, {3.0, 8.0},
                15.7)};
  s.comparison = MethodComparison{"Table 3 row 2", 23.9, 16.7, 30.0, 14.9, 38.0};
  return s;
}

std::vector<std::string> builtin_scenario_names() {
  return {"scenarioA", "scenarioB", "table2_row1", "table2_row2"};
}

ScenarioSpec builtin_scenario(std::string_view name) {
  if (name == "scenarioA") return scenario_a();
  if (name == "scenarioB") return scenario_b();
  if (name == "table2_row1") return table2_row1();
  if (name == "table2_row2") return table2_row2();
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

SimConfig scenario_config(const ScenarioSpec& spec, std::int64_t switches) {
  SimConfig c;
  c.arrival_rate = rates_from_mean_interarrival(spec.mean_interarrival);
  c.cycles = spec.cycles;
  c.stop = StopRule{switches, 0.0};
  return c;
}

ScenarioReport run_scenario(const ScenarioSpec& spec, const SimConfig& config,
                            const ScenarioRunOptions& options) {
  ScenarioReport report;
  report.spec = spec;
  report.switches = config.stop.switches;
  if (options.with_surface) {
    report.surface = brute_force_surface(config, options.grid, options.surface_replications,
                                         options.surface_seed, options.optimize.jobs);
  }
  for (const ReferenceRow& ref : spec.rows) {
    ScenarioRowResult result;
    result.reference = ref;
    result.run = optimize(config, options.rule, ref.s0, options.seed0, options.optimize);
    if (report.surface) {
      const CostSurface& surface = *report.surface;
      auto nearest = [](const std::vector<double>& axis, double v) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < axis.size(); ++k) {
          if (std::abs(axis[k] - v) < std::abs(axis[best] - v)) best = k;
        }
        return best;
      };
      result.surface_cost_at_final = surface.at(nearest(surface.s1_values, result.run.s_final[0]),
                                                nearest(surface.s2_values, result.run.s_final[1]));
    }
    if (spec.comparison) {
      report.r3.push_back(cost_reduction(spec.comparison->J1, result.run.J_final.mean));
    }
    report.rows.push_back(std::move(result));
  }
  return report;
}

}  // namespace tlc
