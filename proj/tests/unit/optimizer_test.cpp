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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "fluid_cases.hpp"
#include "tlc/errors.hpp"
#include "tlc/experiments.hpp"
#include "tlc/optimizer.hpp"

namespace tlc {
namespace {

TEST(GradientStep, MovesAgainstGradient) {
  const ThresholdVector s = gradient_step(ThresholdVector(10.0, 1.0), {2.0, -1.0}, 0.5);
  EXPECT_DOUBLE_EQ(s[0], 9.0);
  EXPECT_DOUBLE_EQ(s[1], 1.5);
}

TEST(GradientStep, ClampsAtLowerBound) {
  const ThresholdVector s = gradient_step(ThresholdVector(0.2, 5.0), {10.0, 0.0}, 0.05);
  EXPECT_DOUBLE_EQ(s[0], 0.1);
  EXPECT_DOUBLE_EQ(s[1], 5.0);
}

TEST(GradientStep, ZeroStepIsFixedPoint) {
  const ThresholdVector s0(3.3, 4.4);
  EXPECT_EQ(gradient_step(s0, {7.0, -7.0}, 0.0), s0);
}

TEST(StepRule, HarmonicAndConstantSchedules) {
  StepRule r;
  EXPECT_DOUBLE_EQ(r.step(0), 2.0);
  EXPECT_DOUBLE_EQ(r.step(50), 1.0);
  EXPECT_DOUBLE_EQ(r.step(150), 0.5);
  r.decay = StepDecay::kConstant;
  EXPECT_DOUBLE_EQ(r.step(150), 2.0);
}

TEST(StepRule, Validates) {
  StepRule r;
  r.rho0 = 0.0;
  EXPECT_THROW(r.validate(), ConfigError);
  r = StepRule{};
  r.s_min = 0.0;
  EXPECT_THROW(r.validate(), ConfigError);
}

TEST(FiniteDifferenceOracle, ZeroArrivalsGiveZero) {
  SimConfig c;
  c.arrival_rate = {0.0, 0.0};
  c.stop = {20, 0.0};
  const FiniteDifference fd = finite_difference_oracle(c, ThresholdVector(2.0, 2.0), 0.5, 3, 1);
  EXPECT_EQ(fd.gradient, (Vec2{0.0, 0.0}));
}

TEST(FiniteDifferenceOracle, AgreesWithIpaOnFluidPath) {
  SimConfig c = testing::random_fluid_config(21);
  const SamplePath path = simulate(c);
  const Vec2 ipa = estimate_gradient(path, c.weights).dL_ds;
  const FiniteDifference fd = finite_difference_oracle(c, c.thresholds, 1e-6, 1, c.seed);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(ipa[i], fd.gradient[i], 1e-4 * std::max(std::abs(fd.gradient[i]), 1e-12));
  }
}

TEST(FiniteDifferenceOracle, RejectsStepBelowLowerBound) {
  EXPECT_THROW(finite_difference_oracle(SimConfig{}, ThresholdVector(0.5, 2.0), 0.5, 1, 1),
               ConfigError);
}

TEST(EvaluateCost, SharedSeedsAndStandardError) {
  SimConfig c = scenario_config(scenario_a(), 200);
  const CostSample a = evaluate_cost(c, ThresholdVector(3.0, 3.0), 6, 10);
  const CostSample b = evaluate_cost(c, ThresholdVector(3.0, 3.0), 6, 10, 3);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.replications, 6);
  EXPECT_GT(a.std_error, 0.0);
  double sum = 0.0;
  for (int r = 0; r < 6; ++r) {
    c.thresholds = ThresholdVector(3.0, 3.0);
    c.seed = 10 + r;
    sum += sample_cost(simulate(c), c.weights);
  }
  EXPECT_NEAR(a.mean, sum / 6.0, 1e-12);
}

class ScenarioARun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const SimConfig c = scenario_config(scenario_a(), 1000);
    StepRule rule;
    rule.max_iterations = 300;
    record_ = new OptRunRecord(optimize(c, rule, ThresholdVector(10.0, 1.0), 1));
  }
  static void TearDownTestSuite() {
    delete record_;
    record_ = nullptr;
  }
  static OptRunRecord* record_;
};

OptRunRecord* ScenarioARun::record_ = nullptr;

TEST_F(ScenarioARun, IteratesStayAboveLowerBound) {
  for (const OptIteration& it : record_->iterations) {
    EXPECT_GE(it.s[0], 0.1);
    EXPECT_GE(it.s[1], 0.1);
  }
  EXPECT_EQ(record_->iterations.front().s, ThresholdVector(10.0, 1.0));
  EXPECT_EQ(record_->iterations[5].seed, 1u + 5u);
}

TEST_F(ScenarioARun, MovingAverageCostTrendsDown) {
  const std::vector<OptIteration>& its = record_->iterations;
  constexpr std::size_t kWindow = 50;
  ASSERT_GT(its.size(), 2 * kWindow);
  // Mean and standard error of J over the window ending at `end`.
  auto window = [&](std::size_t end) {
    double sum = 0.0;
    double sq = 0.0;
    for (std::size_t k = end - kWindow; k < end; ++k) {
      sum += its[k].J;
      sq += its[k].J * its[k].J;
    }
    const double mean = sum / kWindow;
    const double var = std::max(0.0, (sq - kWindow * mean * mean) / (kWindow - 1));
    return std::pair{mean, std::sqrt(var / kWindow)};
  };
  for (std::size_t end = 2 * kWindow; end <= its.size(); ++end) {
    const auto [before, se_before] = window(end - kWindow);
    const auto [after, se_after] = window(end);
    EXPECT_LE(after - before, std::hypot(se_before, se_after)) << "window ending at " << end;
  }
  EXPECT_LT(record_->J_final.mean, record_->J_initial.mean);
  EXPECT_GT(record_->reduction, 0.0);
}

TEST_F(ScenarioARun, IsReproducible) {
  const SimConfig c = scenario_config(scenario_a(), 1000);
  StepRule rule;
  rule.max_iterations = 300;
  const OptRunRecord again = optimize(c, rule, ThresholdVector(10.0, 1.0), 1);
  ASSERT_EQ(again.iterations.size(), record_->iterations.size());
  for (std::size_t k = 0; k < again.iterations.size(); ++k) {
    EXPECT_EQ(again.iterations[k].s, record_->iterations[k].s);
    EXPECT_EQ(again.iterations[k].H, record_->iterations[k].H);
    EXPECT_EQ(again.iterations[k].J, record_->iterations[k].J);
  }
  EXPECT_EQ(again.s_final, record_->s_final);
  EXPECT_EQ(again.J_final.mean, record_->J_final.mean);
}

TEST(Optimize, StopsOnConvergenceWindow) {
  SimConfig c;
  c.arrival_rate = {0.0, 0.0};
  c.stop = {20, 0.0};
  StepRule rule;
  rule.window = 5;
  const OptRunRecord r = optimize(c, rule, ThresholdVector(4.0, 4.0), 1);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(static_cast<int>(r.iterations.size()), 6);
  EXPECT_EQ(r.s_final, ThresholdVector(4.0, 4.0));
}

}  // namespace
}  // namespace tlc
