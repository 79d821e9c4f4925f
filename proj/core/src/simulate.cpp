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

#include <cmath>
#include <sstream>

#include "tlc/errors.hpp"
#include "tlc/sim.hpp"

namespace tlc {

Vec2 rates_from_mean_interarrival(const Vec2& mean_interarrival) {
  Vec2 rates{};
  for (std::size_t n = 0; n < 2; ++n) {
    const double m = mean_interarrival[n];
    if (std::isinf(m) && m > 0.0) {
      rates[n] = 0.0;
    } else if (m > 0.0) {
      rates[n] = 1.0 / m;
    } else {
      std::ostringstream os;
      os << "mean interarrival of road " << n + 1 << " must be positive (or inf), got " << m;
      throw ConfigError(os.str());
    }
  }
  return rates;
}

void SimConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  for (std::size_t n = 0; n < 2; ++n) {
    if (!(arrival_rate[n] >= 0.0) || !std::isfinite(arrival_rate[n])) {
      fail("arrival rates must be finite and non-negative");
    }
    if (!(weights[n] >= 0.0) || !std::isfinite(weights[n])) fail("weights must be non-negative");
    if (!(initial_queue[n] >= 0.0) || !std::isfinite(initial_queue[n])) {
      fail("initial queue must be non-negative");
    }
  }
  if (!(departure_rate > 0.0) || !std::isfinite(departure_rate)) {
    fail("departure rate must be positive");
  }
  // Re-run the constructor checks in case the fields were assigned directly.
  ThresholdVector check(thresholds.values());
  (void)check;
  cycles.validate();
  if (stop.switches < 0 || stop.horizon < 0.0 || !std::isfinite(stop.horizon)) {
    fail("stop rule fields must be non-negative");
  }
  if (stop.switches == 0 && stop.horizon == 0.0) {
    fail("stop rule needs a switch count or a horizon");
  }
  if (!(rate_window > 0.0)) fail("rate window must be positive");
  if (mode == SimMode::kFluid && !fluid_schedule.empty()) {
    if (fluid_schedule.front().start != 0.0) fail("rate schedule must start at t = 0");
    for (std::size_t k = 0; k < fluid_schedule.size(); ++k) {
      const RateSegment& seg = fluid_schedule[k];
      if (k > 0 && !(seg.start > fluid_schedule[k - 1].start)) {
        fail("rate schedule segments must have increasing start times");
      }
      for (double a : seg.alpha) {
        if (!(a >= 0.0) || !std::isfinite(a)) fail("scheduled rates must be non-negative");
      }
    }
  }
  if (mode == SimMode::kDiscrete &&
      (initial_queue[0] != std::floor(initial_queue[0]) ||
       initial_queue[1] != std::floor(initial_queue[1]))) {
    fail("discrete mode needs integer initial queues");
  }
}

SamplePath simulate(const SimConfig& config) {
  config.validate();
  SamplePath path = config.mode == SimMode::kDiscrete ? detail::simulate_discrete(config)
                                                      : detail::simulate_fluid(config);
  detail::enrich_rates(path, config);
  return path;
}

namespace detail {

void enrich_rates(SamplePath& path, const SimConfig& config) {
  if (path.mode == SimMode::kFluid) return;  // exact rates recorded in the loop
  const Vec2 h{config.departure_rate, config.departure_rate};
  for (EventRecord& rec : path.events) {
    if (rec.kind == EventKind::kArrival || rec.kind == EventKind::kDeparture) continue;
    rec.h = h;
    for (Road r : kRoads) {
      rec.alpha[idx(r)] = estimate_rate(path, r, rec.time, config.rate_window);
    }
  }
}

}  // namespace detail
}  // namespace tlc
