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

// Infinitesimal perturbation analysis of the sample cost with respect to the
// thresholds s = [s1, s2].
//
// State derivatives x'_{n,i} = dx_n/ds_i are constant between events, so the
// estimator only needs the event times and the rates recorded at events. The
// light-switch time derivative sigma'_j is carried globally: every switch is a
// green-to-red on one road and a red-to-green on the other.

#ifndef TLC_IPA_HPP_
#define TLC_IPA_HPP_

#include <cstdint>
#include <vector>

#include "tlc/model.hpp"
#include "tlc/sim.hpp"

namespace tlc {

/// Row n holds (x'_{n,1}, x'_{n,2}).
using Mat2 = std::array<Vec2, 2>;

struct DerivativeState {
  Mat2 x_prime{};
  /// Derivative of the most recent switch time; zero before the first switch.
  Vec2 sigma_prime{0.0, 0.0};
  std::int64_t last_switch_index = 0;
  /// Road n is non-empty only through arrivals on its current green phase.
  std::array<bool, 2> green_burst{false, false};
};

/// Switch-time derivative for a switch triggered by `trigger` on road `n`.
///  zeta:  (1[n = i] - x'_{n,i}) / alpha_n
///  gamma: (1[n = i] - x'_{n,i}) / (alpha_n - h_n)
///  lambda, mu: unchanged from the previous switch.
/// Throws EstimatorError for a non-positive zeta rate, a zero gamma net rate,
/// or a trigger that cannot switch the light.
Vec2 switch_time_derivative(GuardKind trigger, Road n, double alpha_n, double h_n,
                            const Vec2& x_prime_before, const Vec2& sigma_prime_prev);

/// How the estimator removes the common time shift that every light switch
/// passes on to the next one (see estimate_gradient).
enum class PhaseShift : std::uint8_t {
  kNone,
  /// Exact for constant rates: the removed shift is charged x_n(T) - x_n(t).
  kTerminal,
  /// Charges (time-average of x_n) - x_n(t) instead, which has far lower
  /// variance on stationary paths.
  kTimeAverage,
};

std::string_view to_string(PhaseShift mode);

/// Rule set for one kind of sample path.
struct EventRules {
  /// When positive, caps alpha_n at h_n - gamma_margin for a crossing from
  /// above that triggers a switch.
  double gamma_margin = 0.0;
  /// A green road whose queue formed on the current green phase while
  /// alpha_n <= h_n is empty in the fluid sense: its G2R takes the x_n = 0
  /// branch.
  bool green_bursts_empty = false;
  PhaseShift phase_shift = PhaseShift::kNone;

  friend bool operator==(const EventRules&, const EventRules&) = default;
};

/// Updates the derivative state across one logged event:
///  G2R_n: x'_n -= h_n sigma'   (x_n > 0)  or  alpha_n sigma'  (x_n = 0);
///  R2G_n: x'_n += alpha_n sigma' (x_n = 0, 0 < alpha_n <= h_n) or h_n sigma';
///  E_n:   x'_n = 0;
///  S_n:   x'_n = -alpha_n sigma' if induced by a switch, 0 if exogenous.
/// sigma' is computed once per switch, at whichever of its two records comes
/// first. Other event kinds leave the state untouched.
DerivativeState apply_event(const DerivativeState& state, const EventRecord& event,
                            const EventRules& rules = {});

struct NepSegment {
  double duration = 0.0;
  Vec2 x_prime{0.0, 0.0};
};

/// Piecewise-constant x'_n over one non-empty period, split at the events
/// where it changes.
class NepAccumulator {
 public:
  NepAccumulator() = default;
  NepAccumulator(Road road, double start) : road_(road), start_(start), last_(start) {}

  Road road() const { return road_; }
  double start() const { return start_; }
  double last_time() const { return last_; }
  const std::vector<NepSegment>& segments() const { return segments_; }

  /// Closes the running segment at `t` with the derivative that held on it.
  void extend(double t, const Vec2& x_prime);
  double total_duration() const;

 private:
  Road road_ = Road::kOne;
  double start_ = 0.0;
  double last_ = 0.0;
  std::vector<NepSegment> segments_;
};

/// Sum over segments of (x' in effect) * (segment duration).
Vec2 nep_cost_derivative(const NepAccumulator& acc);

struct NepContribution {
  Road road = Road::kOne;
  double start = 0.0;
  double end = 0.0;
  bool truncated = false;
  Vec2 derivative{0.0, 0.0};
};

struct GradientEstimate {
  Vec2 dL_ds{0.0, 0.0};
  double horizon = 0.0;
  std::vector<NepContribution> contributions;
};

struct EstimatorOptions {
  /// Verify x' = 0 outside non-empty periods at every event.
  bool check_invariants = true;
  /// Keep per-period contributions in the result.
  bool keep_contributions = true;
  /// Fluid paths follow the plain equations; discrete-event paths need the
  /// queue to look like a fluid before the equations apply.
  EventRules fluid{};
  EventRules discrete{0.1, true, PhaseShift::kTimeAverage};

  friend bool operator==(const EstimatorOptions&, const EstimatorOptions&) = default;
};

/// Single pass over the event log: propagates the derivative state, opens an
/// accumulator at each non-empty period start, closes it at its end, and
/// returns (1/T) sum_n w_n sum_m dL_{n,m}/ds. A period still open at T is
/// truncated there. Throws EstimatorError carrying the event index.
///
/// With a PhaseShift mode other than kNone, each new switch first strips the
/// previous sigma' from the state as a pure time shift c: x'_n += xdot_n c,
/// sigma' = 0. A shifted trajectory costs -c (x_n(T) - x_n(t)), and that
/// amount is added back instead of being propagated.
GradientEstimate estimate_gradient(const SamplePath& path, const Vec2& weights, double horizon,
                                   const EstimatorOptions& options = {});

GradientEstimate estimate_gradient(const SamplePath& path, const Vec2& weights);

}  // namespace tlc

#endif  // TLC_IPA_HPP_
