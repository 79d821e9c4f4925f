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

// Sample-path generation for the controlled intersection.
//
// Two engines share one event-log format:
//  * discrete: Poisson arrivals, one vehicle per departure headway while
//    green, integer queue counts;
//  * fluid: piecewise-linear queue contents under a piecewise-constant
//    arrival-rate schedule, with every guard time solved exactly.
//
// Every run owns its own random streams, derived from the seed alone.

#ifndef TLC_SIM_HPP_
#define TLC_SIM_HPP_

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "tlc/model.hpp"

namespace tlc {

enum class SimMode : std::uint8_t { kDiscrete, kFluid };
enum class DepartureProcess : std::uint8_t { kDeterministic, kExponential };

std::string_view to_string(SimMode mode);
std::string_view to_string(DepartureProcess process);

/// Run ends at whichever configured limit is reached first. A zero field is
/// unused; at least one must be set.
struct StopRule {
  std::int64_t switches = 0;
  double horizon = 0.0;

  friend bool operator==(const StopRule&, const StopRule&) = default;
};

/// Arrival rates in effect from `start` until the next segment (fluid mode).
struct RateSegment {
  double start = 0.0;
  Vec2 alpha{0.0, 0.0};

  friend bool operator==(const RateSegment&, const RateSegment&) = default;
};

struct SimConfig {
  /// Mean arrival rate per road (vehicles/s); 1 / mean interarrival time.
  Vec2 arrival_rate{0.5, 1.0 / 6.0};
  /// Departure capacity H (vehicles/s) of a green, non-empty road.
  double departure_rate = 1.0;
  ThresholdVector thresholds{1.0, 1.0};
  CycleConfig cycles{};
  Vec2 weights{1.0, 1.0};
  StopRule stop{5000, 0.0};
  std::uint64_t seed = 1;
  SimMode mode = SimMode::kDiscrete;
  /// Fluid mode only. Empty means constant `arrival_rate`.
  std::vector<RateSegment> fluid_schedule;
  /// Width t_w of the centred window used to estimate arrival rates.
  double rate_window = 10.0;
  DepartureProcess departures = DepartureProcess::kDeterministic;
  Road initial_green = Road::kOne;
  Vec2 initial_queue{0.0, 0.0};

  /// Throws ConfigError on any invalid field.
  void validate() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Converts mean interarrival times to rates; an infinite mean is rate 0.
Vec2 rates_from_mean_interarrival(const Vec2& mean_interarrival);

enum class EventKind : std::uint8_t {
  kStart,
  kArrival,
  kDeparture,
  kZeta,
  kGamma,
  kLambda,
  kMu,
  kRateChange,
  kG2R,
  kR2G,
  kNepStart,
  kNepEnd,
  kEnd,
};

std::string_view to_string(EventKind kind);

/// What started a non-empty period.
enum class NepCause : std::uint8_t {
  kNone,
  kSwitch,     // green-to-red switch of an empty road with arrivals pending
  kRateSign,   // arrivals exceed capacity on a green, empty road
  kRateOnset,  // arrivals begin on a red, empty road
};

std::string_view to_string(NepCause cause);

/// One entry of the event log. Snapshots are taken right after the event.
/// Switch records (kG2R on the road losing green, kR2G on the road gaining
/// it) carry the guard that triggered them and a 1-based switch index.
/// `alpha` and `h` are the rates in effect at the event: the exact schedule
/// value in fluid mode, the windowed estimate in discrete mode.
struct EventRecord {
  double time = 0.0;
  EventKind kind = EventKind::kStart;
  Road road = Road::kOne;
  Vec2 x{0.0, 0.0};
  Vec2 z{0.0, 0.0};
  Road green = Road::kOne;
  GuardKind trigger = GuardKind::kMu;
  Road trigger_road = Road::kOne;
  NepCause cause = NepCause::kNone;
  std::int64_t switch_index = 0;
  Vec2 alpha{0.0, 0.0};
  Vec2 h{0.0, 0.0};
};

/// Non-empty period [start, end) of one road with the light switches inside.
struct Nep {
  double start = 0.0;
  double end = std::numeric_limits<double>::infinity();
  std::vector<double> switch_times;
  bool closed = false;
};

struct SamplePath {
  SimMode mode = SimMode::kDiscrete;
  std::vector<EventRecord> events;
  std::array<std::vector<double>, 2> arrivals;
  std::array<std::vector<Nep>, 2> neps;
  std::int64_t switch_count = 0;
  double horizon = 0.0;
};

/// Generates one sample path. Identical config (seed included) yields an
/// identical event log. Throws SimulationError if the event loop stalls.
SamplePath simulate(const SimConfig& config);

/// N_a / t_w over the window of width `window` centred on t, clipped to the
/// path, where N_a counts arrivals on `road`. Returns 0 for an empty window.
double estimate_rate(const SamplePath& path, Road road, double t, double window);

/// (1/T) * sum_n w_n * integral_0^T x_n dt, exact for piecewise-constant
/// (discrete) and piecewise-linear (fluid) trajectories.
double sample_cost(const SamplePath& path, const Vec2& weights, double horizon);

/// Convenience: sample_cost over the full path horizon.
double sample_cost(const SamplePath& path, const Vec2& weights);

/// Queue contents at time t, read from the log with the same interpolation
/// as sample_cost. Past the last record the last snapshot holds.
Vec2 queue_at(const SamplePath& path, double t);

namespace detail {
SamplePath simulate_discrete(const SimConfig& config);
SamplePath simulate_fluid(const SimConfig& config);
void enrich_rates(SamplePath& path, const SimConfig& config);
}  // namespace detail

}  // namespace tlc

#endif  // TLC_SIM_HPP_
