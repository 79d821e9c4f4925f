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

#include <benchmark/benchmark.h>

#include "tlc/experiments.hpp"
#include "tlc/ipa.hpp"
#include "tlc/sim.hpp"

namespace tlc {
namespace {

SimConfig scenario_a_at(double s1, double s2, std::int64_t switches) {
  SimConfig c = scenario_config(scenario_a(), switches);
  c.thresholds = ThresholdVector(s1, s2);
  return c;
}

void BM_SimulateDiscrete(benchmark::State& state) {
  SimConfig c = scenario_a_at(5.0, 5.0, state.range(0));
  std::size_t events = 0;
  for (auto _ : state) {
    ++c.seed;
    const SamplePath path = simulate(c);
    events += path.events.size();
    benchmark::DoNotOptimize(path.horizon);
  }
  state.counters["events/s"] =
      benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimulateDiscrete)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_SimulateFluid(benchmark::State& state) {
  SimConfig c = scenario_a_at(5.0, 5.0, state.range(0));
  c.mode = SimMode::kFluid;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(c).horizon);
}
BENCHMARK(BM_SimulateFluid)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_EstimateGradient(benchmark::State& state) {
  const SimConfig c = scenario_a_at(5.0, 5.0, state.range(0));
  const SamplePath path = simulate(c);
  EstimatorOptions options;
  options.check_invariants = false;
  options.keep_contributions = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_gradient(path, c.weights, path.horizon, options).dL_ds);
  }
  state.counters["events"] = static_cast<double>(path.events.size());
  state.SetComplexityN(static_cast<benchmark::IterationCount>(path.events.size()));
}
BENCHMARK(BM_EstimateGradient)
    ->Arg(250)
    ->Arg(1000)
    ->Arg(4000)
    ->Arg(16000)
    ->Unit(benchmark::kMicrosecond)
    ->Complexity(benchmark::oN);

void BM_SampleCost(benchmark::State& state) {
  const SimConfig c = scenario_a_at(5.0, 5.0, 5000);
  const SamplePath path = simulate(c);
  for (auto _ : state) benchmark::DoNotOptimize(sample_cost(path, c.weights));
}
BENCHMARK(BM_SampleCost)->Unit(benchmark::kMicrosecond);

// One row of the brute-force grid.
void BM_SurfaceSlice(benchmark::State& state) {
  const SimConfig c = scenario_config(scenario_a(), 1000);
  const GridSpec row{1.0, 1.0, 1.0, 15.0, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_force_surface(c, row, 2, 1).min_cost);
  }
}
BENCHMARK(BM_SurfaceSlice)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace tlc

BENCHMARK_MAIN();
