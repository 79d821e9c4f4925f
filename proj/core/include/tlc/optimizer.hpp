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

// Stochastic-approximation descent on the thresholds:
//
//   s_{l+1} = max(s_min, s_l - rho_l * H_l)
//
// where H_l is the IPA gradient estimate on a fresh sample path with seed
// seed0 + l.

#ifndef TLC_OPTIMIZER_HPP_
#define TLC_OPTIMIZER_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

#include "tlc/ipa.hpp"
#include "tlc/model.hpp"
#include "tlc/sim.hpp"

namespace tlc {

enum class StepDecay : std::uint8_t { kConstant, kHarmonic };

std::string_view to_string(StepDecay decay);

struct StepRule {
  double rho0 = 2.0;
  StepDecay decay = StepDecay::kHarmonic;
  /// Iterations over which a harmonic step halves.
  double kappa = 50.0;
  double s_min = 0.1;
  int max_iterations = 500;
  /// Converged once |s_{l+1} - s_l|_inf < tolerance for `window` iterations
  /// in a row.
  double tolerance = 0.05;
  int window = 20;
  /// Sample paths averaged into each gradient estimate.
  int replications = 1;

  /// rho_l for iteration l (0-based).
  double step(int l) const;
  void validate() const;

  friend bool operator==(const StepRule&, const StepRule&) = default;
};

/// Componentwise s - rho * H, clamped below at s_min.
ThresholdVector gradient_step(const ThresholdVector& s, const Vec2& H, double rho,
                              double s_min = 0.1);

/// Replication mean of the sample cost and its standard error.
struct CostSample {
  double mean = 0.0;
  double std_error = 0.0;
  int replications = 0;
};

/// Runs `replications` paths at thresholds `s` with seeds seed_base + r.
CostSample evaluate_cost(const SimConfig& config, const ThresholdVector& s, int replications,
                         std::uint64_t seed_base, unsigned jobs = 1);

struct OptIteration {
  int l = 0;
  ThresholdVector s;
  Vec2 H{0.0, 0.0};
  double J = 0.0;
  std::uint64_t seed = 0;
};

struct OptRunRecord {
  std::vector<OptIteration> iterations;
  ThresholdVector s0;
  ThresholdVector s_final;
  CostSample J_initial;
  CostSample J_final;
  /// 100 * (J_initial - J_final) / J_initial.
  double reduction = 0.0;
  bool converged = false;
};

struct OptimizeOptions {
  EstimatorOptions estimator{.check_invariants = false, .keep_contributions = false};
  /// Paths behind the reported initial and final costs. They use seeds
  /// evaluation_seed + r, shared by both ends.
  int evaluation_replications = 10;
  std::uint64_t evaluation_seed = 1000000;
  unsigned jobs = 1;
};

/// Descent from s0. Throws EstimatorError naming the iteration if the
/// estimator faults.
OptRunRecord optimize(const SimConfig& config, const StepRule& rule, const ThresholdVector& s0,
                      std::uint64_t seed0, const OptimizeOptions& options = {});

struct FiniteDifference {
  Vec2 gradient{0.0, 0.0};
  /// Standard error of the per-replication differences.
  Vec2 std_error{0.0, 0.0};
};

/// Central difference [J(s + d e_i) - J(s - d e_i)] / 2d of replication means,
/// the same seeds seed_base + r on both sides. Requires s - d >= s_min.
FiniteDifference finite_difference_oracle(const SimConfig& config, const ThresholdVector& s,
                                          double delta, int replications,
                                          std::uint64_t seed_base, unsigned jobs = 1,
                                          double s_min = 0.1);

}  // namespace tlc

#endif  // TLC_OPTIMIZER_HPP_
