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

#include <gtest/gtest.h>

#include <cmath>

#include "fluid_cases.hpp"
#include "path_invariants.hpp"
#include "tlc/errors.hpp"
#include "tlc/experiments.hpp"
#include "tlc/ipa.hpp"

namespace tlc {
namespace {

EventRecord switch_record(EventKind kind, Road road, GuardKind trigger, Road trigger_road,
                          std::int64_t index) {
  EventRecord e;
  e.kind = kind;
  e.road = road;
  e.trigger = trigger;
  e.trigger_road = trigger_road;
  e.switch_index = index;
  e.alpha = {0.5, 0.2};
  e.h = {1.0, 1.0};
  return e;
}

TEST(SwitchTimeDerivative, ZetaDividesByArrivalRate) {
  const Vec2 s = switch_time_derivative(GuardKind::kZeta, Road::kOne, 0.5, 1.0, {0.0, 0.0},
                                        {9.0, 9.0});
  EXPECT_DOUBLE_EQ(s[0], 2.0);
  EXPECT_DOUBLE_EQ(s[1], 0.0);
}

TEST(SwitchTimeDerivative, GammaDividesByNetRate) {
  const Vec2 s = switch_time_derivative(GuardKind::kGamma, Road::kTwo, 0.2, 1.0, {0.0, 0.0},
                                        {0.0, 0.0});
  EXPECT_DOUBLE_EQ(s[0], 0.0);
  EXPECT_DOUBLE_EQ(s[1], -1.25);
  // The road's own derivative enters for both components.
  const Vec2 t = switch_time_derivative(GuardKind::kGamma, Road::kTwo, 0.2, 1.0, {0.4, 0.2},
                                        {0.0, 0.0});
  EXPECT_DOUBLE_EQ(t[0], -0.4 / -0.8);
  EXPECT_DOUBLE_EQ(t[1], 0.8 / -0.8);
}

TEST(SwitchTimeDerivative, ClockTriggersCarryPreviousValue) {
  for (GuardKind k : {GuardKind::kLambda, GuardKind::kMu}) {
    const Vec2 s = switch_time_derivative(k, Road::kOne, 0.5, 1.0, {0.3, 0.3}, {0.4, -0.1});
    EXPECT_DOUBLE_EQ(s[0], 0.4);
    EXPECT_DOUBLE_EQ(s[1], -0.1);
  }
}

TEST(SwitchTimeDerivative, DegenerateRatesFault) {
  EXPECT_THROW(switch_time_derivative(GuardKind::kZeta, Road::kOne, 0.0, 1.0, {}, {}),
               EstimatorError);
  EXPECT_THROW(switch_time_derivative(GuardKind::kGamma, Road::kOne, 1.0, 1.0, {}, {}),
               EstimatorError);
  EXPECT_THROW(switch_time_derivative(GuardKind::kEmpty, Road::kOne, 0.5, 1.0, {}, {}),
               EstimatorError);
}

TEST(ApplyEvent, NepEndClearsDerivative) {
  DerivativeState s;
  s.x_prime[1] = {0.7, -0.2};
  EventRecord e;
  e.kind = EventKind::kNepEnd;
  e.road = Road::kTwo;
  EXPECT_EQ(apply_event(s, e).x_prime[1], (Vec2{0.0, 0.0}));
}

TEST(ApplyEvent, GreenToRedOnBusyRoad) {
  DerivativeState s;
  s.x_prime[0] = {0.3, 0.0};
  s.sigma_prime = {2.0, 0.0};
  s.last_switch_index = 1;
  EventRecord e = switch_record(EventKind::kG2R, Road::kOne, GuardKind::kMu, Road::kOne, 1);
  e.x = {3.0, 0.0};
  const DerivativeState out = apply_event(s, e);
  EXPECT_DOUBLE_EQ(out.x_prime[0][0], -1.7);
  EXPECT_DOUBLE_EQ(out.x_prime[0][1], 0.0);
}

TEST(ApplyEvent, GreenToRedOnEmptyRoadUsesArrivalRate) {
  DerivativeState s;
  s.sigma_prime = {2.0, 1.0};
  s.last_switch_index = 1;
  EventRecord e = switch_record(EventKind::kG2R, Road::kOne, GuardKind::kMu, Road::kOne, 1);
  const DerivativeState out = apply_event(s, e);
  EXPECT_DOUBLE_EQ(out.x_prime[0][0], -1.0);
  EXPECT_DOUBLE_EQ(out.x_prime[0][1], -0.5);
}

TEST(ApplyEvent, RedToGreenBranches) {
  DerivativeState s;
  s.sigma_prime = {1.0, -1.0};
  s.last_switch_index = 3;
  EventRecord e = switch_record(EventKind::kR2G, Road::kTwo, GuardKind::kMu, Road::kOne, 3);
  e.x = {0.0, 4.0};
  DerivativeState out = apply_event(s, e);
  EXPECT_EQ(out.x_prime[1], (Vec2{1.0, -1.0}));  // h = 1
  e.x = {0.0, 0.0};
  out = apply_event(s, e);
  EXPECT_EQ(out.x_prime[1], (Vec2{0.2, -0.2}));  // empty, 0 < alpha <= h
}

TEST(ApplyEvent, NewSwitchComputesSigmaOnce) {
  DerivativeState s;
  s.last_switch_index = 0;
  EventRecord g2r = switch_record(EventKind::kG2R, Road::kTwo, GuardKind::kZeta, Road::kOne, 1);
  g2r.x = {1.0, 2.0};
  const DerivativeState a = apply_event(s, g2r);
  EXPECT_EQ(a.last_switch_index, 1);
  EXPECT_DOUBLE_EQ(a.sigma_prime[0], 2.0);
  EXPECT_DOUBLE_EQ(a.x_prime[1][0], -2.0);
  EventRecord r2g = switch_record(EventKind::kR2G, Road::kOne, GuardKind::kZeta, Road::kOne, 1);
  r2g.x = g2r.x;
  const DerivativeState b = apply_event(a, r2g);
  EXPECT_EQ(b.sigma_prime, a.sigma_prime);
  EXPECT_DOUBLE_EQ(b.x_prime[0][0], 2.0);
}

TEST(ApplyEvent, NepStartInducedOrExogenous) {
  DerivativeState s;
  s.sigma_prime = {1.0, 0.5};
  s.x_prime[0] = {0.1, 0.1};
  EventRecord e;
  e.kind = EventKind::kNepStart;
  e.road = Road::kOne;
  e.alpha = {0.5, 0.2};
  e.cause = NepCause::kSwitch;
  EXPECT_EQ(apply_event(s, e).x_prime[0], (Vec2{-0.5, -0.25}));
  e.cause = NepCause::kRateOnset;
  EXPECT_EQ(apply_event(s, e).x_prime[0], (Vec2{0.0, 0.0}));
  e.cause = NepCause::kNone;
  EXPECT_THROW(apply_event(s, e), EstimatorError);
}

TEST(ApplyEvent, SwitchFromNonSwitchingGuardFaults) {
  const EventRecord e =
      switch_record(EventKind::kG2R, Road::kOne, GuardKind::kEmpty, Road::kOne, 1);
  EXPECT_THROW(apply_event(DerivativeState{}, e), EstimatorError);
}

TEST(NepCostDerivative, SumsSegmentTimesDerivative) {
  NepAccumulator one(Road::kOne, 2.0);
  one.extend(5.0, {0.5, -1.0});
  EXPECT_EQ(nep_cost_derivative(one), (Vec2{1.5, -3.0}));

  NepAccumulator zero(Road::kTwo, 0.0);
  zero.extend(4.0, {0.0, 0.0});
  EXPECT_EQ(nep_cost_derivative(zero), (Vec2{0.0, 0.0}));

  NepAccumulator three(Road::kOne, 1.0);
  three.extend(2.0, {1.0, 0.0});
  three.extend(4.0, {-1.0, 2.0});
  three.extend(4.0, {9.0, 9.0});  // empty segment
  three.extend(7.0, {0.5, 0.5});
  EXPECT_EQ(three.segments().size(), 3u);
  EXPECT_DOUBLE_EQ(three.total_duration(), 6.0);
  EXPECT_EQ(nep_cost_derivative(three), (Vec2{1.0 - 2.0 + 1.5, 4.0 + 1.5}));
}

TEST(EstimateGradient, ZeroArrivalsGiveZero) {
  SimConfig c;
  c.arrival_rate = {0.0, 0.0};
  c.stop = {10, 0.0};
  for (SimMode mode : {SimMode::kDiscrete, SimMode::kFluid}) {
    c.mode = mode;
    const GradientEstimate g = estimate_gradient(simulate(c), c.weights);
    EXPECT_EQ(g.dL_ds, (Vec2{0.0, 0.0}));
    EXPECT_TRUE(g.contributions.empty());
  }
}

TEST(EstimateGradient, MatchesFluidFiniteDifference) {
  int checked = 0;
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const testing::FluidCheck r = testing::check_fluid_gradient(testing::random_fluid_config(seed));
    if (!r.order_preserved) continue;
    ++checked;
    EXPECT_GT(r.mid_nep_switches, 0);
    EXPECT_GT(r.held_switches, 0);
    EXPECT_LT(r.max_relative_error(), 1e-4)
        << "seed " << seed << " ipa (" << r.ipa[0] << ", " << r.ipa[1] << ") fd (" << r.fd[0]
        << ", " << r.fd[1] << ")";
  }
  EXPECT_GE(checked, 8);
}

TEST(EstimateGradient, ConstantRateFluidMatchesFiniteDifference) {
  SimConfig c;
  c.mode = SimMode::kFluid;
  c.arrival_rate = {0.5, 1.0 / 6.0};
  c.stop = {0, 2000.0};
  for (const Vec2& s : {Vec2{4.3, 3.7}, Vec2{7.7, 2.9}, Vec2{1.9, 3.7}}) {
    c.thresholds = ThresholdVector(s);
    const testing::FluidCheck r = testing::check_fluid_gradient(c);
    ASSERT_TRUE(r.order_preserved);
    // A threshold that never binds has an exactly zero derivative; the
    // difference quotient then holds only rounding noise.
    EXPECT_LT(r.max_relative_error(1e-3), 1e-4) << s[0] << ", " << s[1];
  }
}

TEST(EstimateGradient, TerminalShiftRemovalIsExactOnConstantRateFluid) {
  SimConfig c;
  c.mode = SimMode::kFluid;
  c.arrival_rate = {0.5, 1.0 / 6.0};
  c.stop = {0, 2000.0};
  EstimatorOptions plain;
  EstimatorOptions terminal;
  terminal.fluid.phase_shift = PhaseShift::kTerminal;
  for (const Vec2& s : {Vec2{4.3, 3.7}, Vec2{7.7, 2.9}}) {
    c.thresholds = ThresholdVector(s);
    const SamplePath path = simulate(c);
    const Vec2 a = estimate_gradient(path, c.weights, path.horizon, plain).dL_ds;
    const Vec2 b = estimate_gradient(path, c.weights, path.horizon, terminal).dL_ds;
    for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(a[i], b[i], 1e-9 * (1.0 + std::abs(a[i])));
  }
}

TEST(EstimateGradient, ContributionsAddUpToEstimate) {
  const SimConfig c = testing::random_fluid_config(4);
  const SamplePath path = simulate(c);
  const GradientEstimate g = estimate_gradient(path, c.weights, path.horizon);
  Vec2 sum{0.0, 0.0};
  for (const NepContribution& k : g.contributions) {
    for (std::size_t i = 0; i < 2; ++i) sum[i] += c.weights[idx(k.road)] * k.derivative[i];
  }
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(sum[i] / path.horizon, g.dL_ds[i], 1e-12 * (1.0 + std::abs(g.dL_ds[i])));
  }
  int truncated = 0;
  for (const NepContribution& k : g.contributions) truncated += k.truncated ? 1 : 0;
  EXPECT_LE(truncated, 2);
}

TEST(EstimateGradient, DerivativeVanishesOutsidePeriodsOnDiscretePaths) {
  EstimatorOptions checked;
  checked.check_invariants = true;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const SimConfig c = testing::random_discrete_config(seed, 300);
    const SamplePath path = simulate(c);
    EXPECT_NO_THROW(estimate_gradient(path, c.weights, path.horizon, checked)) << seed;
  }
}

TEST(EstimateGradient, ScenarioAPathIsFiniteAndRepeatable) {
  SimConfig c = scenario_config(scenario_a(), 1000);
  c.thresholds = ThresholdVector(5.0, 5.0);
  c.seed = 8;
  const SamplePath path = simulate(c);
  const GradientEstimate a = estimate_gradient(path, c.weights);
  const GradientEstimate b = estimate_gradient(path, c.weights);
  EXPECT_EQ(a.dL_ds, b.dL_ds);
  EXPECT_TRUE(std::isfinite(a.dL_ds[0]) && std::isfinite(a.dL_ds[1]));
}

}  // namespace
}  // namespace tlc
