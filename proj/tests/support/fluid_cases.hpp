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

// Randomized fluid configurations and the finite-difference oracle used to
// check the IPA estimator on them.

#ifndef TLC_TESTS_FLUID_CASES_HPP_
#define TLC_TESTS_FLUID_CASES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tlc/ipa.hpp"
#include "tlc/sim.hpp"

namespace tlc::testing {

/// Fluid configuration with a random piecewise-constant rate schedule.
inline SimConfig random_fluid_config(std::uint64_t seed, double horizon = 600.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SimConfig c;
  c.mode = SimMode::kFluid;
  c.stop = {0, horizon};
  c.thresholds = ThresholdVector(1.0 + 7.0 * unit(gen), 1.0 + 7.0 * unit(gen));
  for (std::size_t n = 0; n < 2; ++n) {
    c.cycles.theta_min[n] = 5.0 + 10.0 * unit(gen);
    c.cycles.theta_max[n] = c.cycles.theta_min[n] + 5.0 + 20.0 * unit(gen);
  }
  c.weights = {0.5 + unit(gen), 0.5 + unit(gen)};
  for (double t = 0.0; t < horizon;) {
    RateSegment seg;
    seg.start = t;
    seg.alpha = {0.9 * unit(gen), 0.6 * unit(gen)};
    c.fluid_schedule.push_back(seg);
    t += 10.0 + 40.0 * unit(gen);
  }
  return c;
}

/// Kind/road sequence of a path, used to tell whether a perturbation moved
/// any event past another.
inline std::vector<int> event_signature(const SamplePath& path) {
  std::vector<int> sig;
  sig.reserve(path.events.size());
  for (const EventRecord& e : path.events) {
    sig.push_back(static_cast<int>(e.kind) * 2 + static_cast<int>(idx(e.road)));
  }
  return sig;
}

struct FluidCheck {
  bool order_preserved = true;
  Vec2 ipa{0.0, 0.0};
  Vec2 fd{0.0, 0.0};
  int mid_nep_switches = 0;
  int held_switches = 0;  // lambda or mu
  int neps = 0;

  /// |IPA - FD| / max(|FD|, floor), worst component.
  double max_relative_error(double floor = 1e-12) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      const double err = std::abs(ipa[i] - fd[i]) / std::max(std::abs(fd[i]), floor);
      worst = std::max(worst, err);
    }
    return worst;
  }
};

/// IPA on the nominal path against the central difference of the sample cost
/// over the same horizon at s +- delta e_i.
inline FluidCheck check_fluid_gradient(const SimConfig& config, double delta = 1e-6) {
  FluidCheck out;
  const SamplePath path = simulate(config);
  const double T = path.horizon;
  out.ipa = estimate_gradient(path, config.weights, T).dL_ds;
  const std::vector<int> sig = event_signature(path);
  for (const EventRecord& e : path.events) {
    if (e.kind == EventKind::kG2R) {
      if (e.x[idx(e.road)] > 0.0) ++out.mid_nep_switches;
      if (e.trigger == GuardKind::kLambda || e.trigger == GuardKind::kMu) ++out.held_switches;
    }
    if (e.kind == EventKind::kNepStart) ++out.neps;
  }
  for (std::size_t i = 0; i < 2; ++i) {
    Vec2 s = config.thresholds.values();
    SimConfig up = config;
    SimConfig down = config;
    s[i] += delta;
    up.thresholds = ThresholdVector(s);
    s[i] -= 2.0 * delta;
    down.thresholds = ThresholdVector(s);
    const SamplePath pu = simulate(up);
    const SamplePath pd = simulate(down);
    if (event_signature(pu) != sig || event_signature(pd) != sig) out.order_preserved = false;
    out.fd[i] = (sample_cost(pu, config.weights, T) - sample_cost(pd, config.weights, T)) /
                (2.0 * delta);
  }
  return out;
}

}  // namespace tlc::testing

#endif  // TLC_TESTS_FLUID_CASES_HPP_
