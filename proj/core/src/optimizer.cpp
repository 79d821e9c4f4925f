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

#include "tlc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parallel.hpp"
#include "tlc/errors.hpp"

namespace tlc {
namespace {

// Replication r > 0 of iteration l draws from seed_l + r * kReplicationStride,
// far from every other iteration's seed.
constexpr std::uint64_t kReplicationStride = 1ULL << 32;

CostSample summarize(const std::vector<double>& values) {
  CostSample out;
  out.replications = static_cast<int>(values.size());
  if (values.empty()) return out;
  long double sum = 0.0L;
  for (double v : values) sum += v;
  const long double mean = sum / values.size();
  out.mean = static_cast<double>(mean);
  if (values.size() > 1) {
    long double ss = 0.0L;
    for (double v : values) ss += (v - mean) * (v - mean);
    const long double var = ss / (values.size() - 1);
    out.std_error = static_cast<double>(std::sqrt(var / values.size()));
  }
  return out;
}

SimConfig at(const SimConfig& config, const ThresholdVector& s, std::uint64_t seed) {
  SimConfig c = config;
  c.thresholds = s;
  c.seed = seed;
  return c;
}

}  // namespace

std::string_view to_string(StepDecay decay) {
  return decay == StepDecay::kConstant ? "constant" : "harmonic";
}

double StepRule::step(int l) const {
  if (decay == StepDecay::kConstant) return rho0;
  return rho0 / (1.0 + static_cast<double>(l) / kappa);
}

void StepRule::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (!(rho0 > 0.0) || !std::isfinite(rho0)) fail("rho0 must be positive");
  if (!(s_min > 0.0)) fail("s_min must be positive");
  if (decay == StepDecay::kHarmonic && !(kappa > 0.0)) fail("kappa must be positive");
  if (max_iterations < 1) fail("max_iterations must be at least 1");
  if (!(tolerance > 0.0)) fail("tolerance must be positive");
  if (window < 1) fail("convergence window must be at least 1");
  if (replications < 1) fail("replications must be at least 1");
}

ThresholdVector gradient_step(const ThresholdVector& s, const Vec2& H, double rho, double s_min) {
  Vec2 next{};
  for (std::size_t i = 0; i < 2; ++i) next[i] = std::max(s_min, s[i] - rho * H[i]);
  return ThresholdVector(next);
}

CostSample evaluate_cost(const SimConfig& config, const ThresholdVector& s, int replications,
                         std::uint64_t seed_base, unsigned jobs) {
  std::vector<double> costs(static_cast<std::size_t>(std::max(0, replications)));
  detail::parallel_for(costs.size(), jobs, [&](std::size_t r) {
    const SimConfig c = at(config, s, seed_base + r);
    costs[r] = sample_cost(simulate(c), c.weights);
  });
  return summarize(costs);
}

OptRunRecord optimize(const SimConfig& config, const StepRule& rule, const ThresholdVector& s0,
                      std::uint64_t seed0, const OptimizeOptions& options) {
  rule.validate();
  config.validate();
  OptRunRecord record;
  record.s0 = s0;
  record.J_initial = evaluate_cost(config, s0, options.evaluation_replications,
                                   options.evaluation_seed, options.jobs);

  ThresholdVector s = s0;
  int calm = 0;
  const auto reps = static_cast<std::size_t>(rule.replications);
  std::vector<Vec2> grads(reps);
  std::vector<double> costs(reps);
  for (int l = 0; l < rule.max_iterations; ++l) {
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(l);
    try {
      detail::parallel_for(reps, options.jobs, [&](std::size_t r) {
        const SimConfig c = at(config, s, seed + r * kReplicationStride);
        const SamplePath path = simulate(c);
        costs[r] = sample_cost(path, c.weights);
        grads[r] = estimate_gradient(path, c.weights, path.horizon, options.estimator).dL_ds;
      });
    } catch (const EstimatorError& e) {
      std::ostringstream os;
      os << "iteration " << l << " at s = (" << s[0] << ", " << s[1] << "): " << e.reason();
      throw EstimatorError(os.str(), e.event_index());
    }
    Vec2 H{0.0, 0.0};
    double J = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      H[0] += grads[r][0] / reps;
      H[1] += grads[r][1] / reps;
      J += costs[r] / reps;
    }
    record.iterations.push_back({l, s, H, J, seed});

    const ThresholdVector next = gradient_step(s, H, rule.step(l), rule.s_min);
    const double move = std::max(std::abs(next[0] - s[0]), std::abs(next[1] - s[1]));
    s = next;
    calm = move < rule.tolerance ? calm + 1 : 0;
    if (calm >= rule.window) {
      record.converged = true;
      break;
    }
  }
  record.s_final = s;
  record.J_final = evaluate_cost(config, s, options.evaluation_replications,
                                 options.evaluation_seed, options.jobs);
  if (record.J_initial.mean > 0.0) {
    record.reduction =
        100.0 * (record.J_initial.mean - record.J_final.mean) / record.J_initial.mean;
  }
  return record;
}

FiniteDifference finite_difference_oracle(const SimConfig& config, const ThresholdVector& s,
                                          double delta, int replications,
                                          std::uint64_t seed_base, unsigned jobs,
                                          double s_min) {
  if (!(delta > 0.0)) throw ConfigError("finite-difference step must be positive");
  if (replications < 1) throw ConfigError("replications must be at least 1");
  if (s[0] - delta < s_min || s[1] - delta < s_min) {
    throw ConfigError("finite-difference stencil leaves the feasible thresholds");
  }
  FiniteDifference out;
  const auto reps = static_cast<std::size_t>(replications);
  for (std::size_t i = 0; i < 2; ++i) {
    Vec2 up = s.values();
    Vec2 down = s.values();
    up[i] += delta;
    down[i] -= delta;
    std::vector<double> diffs(reps);
    detail::parallel_for(reps, jobs, [&](std::size_t r) {
      const SimConfig cu = at(config, ThresholdVector(up), seed_base + r);
      const SimConfig cd = at(config, ThresholdVector(down), seed_base + r);
      const long double ju = sample_cost(simulate(cu), cu.weights);
      const long double jd = sample_cost(simulate(cd), cd.weights);
      diffs[r] = static_cast<double>((ju - jd) / (2.0L * delta));
    });
    const CostSample d = summarize(diffs);
    out.gradient[i] = d.mean;
    out.std_error[i] = d.std_error;
  }
  return out;
}

}  // namespace tlc
