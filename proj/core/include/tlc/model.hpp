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

// Hybrid model of a two-road signalized intersection under threshold-based
// (quasi-dynamic) control. Everything here is pure: no clocks run, no random
// numbers are drawn. The simulators in sim.hpp drive these functions.

#ifndef TLC_MODEL_HPP_
#define TLC_MODEL_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace tlc {

using Vec2 = std::array<double, 2>;

/// Absolute tolerance (seconds) for guard comparisons on clocks and times.
inline constexpr double kTimeTolerance = 1e-9;

enum class Road : std::uint8_t { kOne = 0, kTwo = 1 };

constexpr std::size_t idx(Road r) { return static_cast<std::size_t>(r); }
constexpr Road other(Road r) { return r == Road::kOne ? Road::kTwo : Road::kOne; }
constexpr int number(Road r) { return static_cast<int>(r) + 1; }
constexpr Road road_at(std::size_t i) { return i == 0 ? Road::kOne : Road::kTwo; }
inline constexpr std::array<Road, 2> kRoads = {Road::kOne, Road::kTwo};

/// Queue-content thresholds s = [s1, s2], both strictly positive.
class ThresholdVector {
 public:
  ThresholdVector() = default;
  ThresholdVector(double s1, double s2);
  explicit ThresholdVector(const Vec2& s) : ThresholdVector(s[0], s[1]) {}

  double operator[](std::size_t i) const { return s_[i]; }
  double operator[](Road r) const { return s_[idx(r)]; }
  const Vec2& values() const { return s_; }

  friend bool operator==(const ThresholdVector&, const ThresholdVector&) = default;

 private:
  Vec2 s_{1.0, 1.0};
};

/// Minimum and maximum green durations per road.
struct CycleConfig {
  Vec2 theta_min{10.0, 10.0};
  Vec2 theta_max{30.0, 30.0};

  /// Throws ConfigError unless 0 < theta_min[n] < theta_max[n].
  void validate() const;

  friend bool operator==(const CycleConfig&, const CycleConfig&) = default;
};

/// Queue contents, clocks and the light assignment. The clock of the red road
/// is frozen at zero; the green road's clock measures time since its last
/// red-to-green switch (it is zero at the switch instant itself).
struct HybridState {
  Vec2 x{0.0, 0.0};
  Vec2 z{0.0, 0.0};
  Road green = Road::kOne;
};

enum class Region : std::uint8_t { kX0, kX1, kX2, kX3 };

struct FlowRates {
  Vec2 alpha{0.0, 0.0};
  Vec2 h{1.0, 1.0};
};

/// Guard events of the hybrid automaton. kZeta..kMu (threshold crossings
/// from below/above, minimum and maximum green) are the only ones that can
/// switch the light. kEmpty ends a non-empty period; kRateSign and
/// kRateOnset are the exogenous rate changes that can start one.
enum class GuardKind : std::uint8_t {
  kZeta,
  kGamma,
  kLambda,
  kMu,
  kEmpty,
  kRateSign,
  kRateOnset,
};

std::string_view to_string(GuardKind kind);

/// Controller rule that fired a reset of the green road's clock.
enum class ResetRule : std::uint8_t { kNone, kRule1, kRule2, kRule3, kRule4 };

struct ResetDecision {
  bool due = false;
  ResetRule rule = ResetRule::kNone;
  GuardKind trigger = GuardKind::kMu;
  Road trigger_road = Road::kOne;
};

Region region_from_sides(bool road1_at_or_above, bool road2_at_or_above);

/// X0: both below; X1: only road 2 at-or-above; X2: only road 1; X3: both.
Region region_of(const Vec2& x, const ThresholdVector& s);

std::string_view to_string(Region region);

/// Light assignment demanded by the controller. The green road is the one
/// with a positive clock; when both clocks read zero (the instant of a
/// switch, or t = 0) it is `green_if_idle`. The green road keeps the light
/// until its maximum green, except that in the region favouring the other
/// road it yields as soon as its minimum green has elapsed.
/// Throws InvariantViolation if both clocks are positive.
Road control_decision(Region region, const Vec2& z, const CycleConfig& cycles,
                      Road green_if_idle = Road::kOne);

/// Rate of change of x_n: alpha on red; zero on green with an empty queue
/// that the capacity can absorb; alpha - h otherwise.
double flow_rate(Road n, const HybridState& state, const FlowRates& rates);

/// Departure flow of road n: h if green and non-empty, the arrival rate if
/// green and empty, zero on red.
double departure_rate(Road n, const HybridState& state, const FlowRates& rates);

/// Whether the green road n's clock must reset given the queue values right
/// after the current instant, and which rule demands it. Rules are checked
/// in priority order maximum green, crossing from above, minimum green,
/// perpendicular crossing from below.
ResetDecision clock_reset_due(Road n, const HybridState& before, const Vec2& x_after,
                              const ThresholdVector& s, const CycleConfig& cycles);

}  // namespace tlc

#endif  // TLC_MODEL_HPP_
