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

#include <algorithm>
#include <iterator>

#include "tlc/errors.hpp"
#include "tlc/sim.hpp"

namespace tlc {

std::string_view to_string(SimMode mode) {
  return mode == SimMode::kDiscrete ? "discrete" : "fluid";
}

std::string_view to_string(DepartureProcess process) {
  return process == DepartureProcess::kDeterministic ? "deterministic" : "exponential";
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kStart: return "start";
    case EventKind::kArrival: return "arrival";
    case EventKind::kDeparture: return "departure";
    case EventKind::kZeta: return "zeta";
    case EventKind::kGamma: return "gamma";
    case EventKind::kLambda: return "lambda";
    case EventKind::kMu: return "mu";
    case EventKind::kRateChange: return "rate";
    case EventKind::kG2R: return "G2R";
    case EventKind::kR2G: return "R2G";
    case EventKind::kNepStart: return "S";
    case EventKind::kNepEnd: return "E";
    case EventKind::kEnd: return "end";
  }
  return "?";
}

std::string_view to_string(NepCause cause) {
  switch (cause) {
    case NepCause::kNone: return "none";
    case NepCause::kSwitch: return "G2R";
    case NepCause::kRateSign: return "e6";
    case NepCause::kRateOnset: return "e7";
  }
  return "?";
}

double estimate_rate(const SamplePath& path, Road road, double t, double window) {
  const double lo = std::max(0.0, t - 0.5 * window);
  const double hi = std::min(path.horizon, t + 0.5 * window);
  const double width = hi - lo;
  if (!(width > 0.0)) return 0.0;
  const std::vector<double>& arrivals = path.arrivals[idx(road)];
  const auto first = std::lower_bound(arrivals.begin(), arrivals.end(), lo);
  const auto last = std::upper_bound(first, arrivals.end(), hi);
  return static_cast<double>(last - first) / width;
}

double sample_cost(const SamplePath& path, const Vec2& weights, double horizon) {
  if (!(horizon > 0.0)) return 0.0;
  const std::vector<EventRecord>& ev = path.events;
  const bool linear = path.mode == SimMode::kFluid;
  long double area = 0.0L;
  for (std::size_t k = 0; k + 1 < ev.size(); ++k) {
    const double t0 = ev[k].time;
    if (t0 >= horizon) break;
    const double t1 = std::min(ev[k + 1].time, horizon);
    const double dt = t1 - t0;
    if (dt <= 0.0) continue;
    for (std::size_t n = 0; n < 2; ++n) {
      double level = ev[k].x[n];
      if (linear) {
        // Linear between consecutive records; clip at the horizon if needed.
        const double full = ev[k + 1].time - t0;
        const double end = full > 0.0 ? ev[k].x[n] + (ev[k + 1].x[n] - ev[k].x[n]) * (dt / full)
                                      : ev[k + 1].x[n];
        level = 0.5 * (ev[k].x[n] + end);
      }
      area += static_cast<long double>(weights[n]) * level * dt;
    }
  }
  return static_cast<double>(area / horizon);
}

double sample_cost(const SamplePath& path, const Vec2& weights) {
  return sample_cost(path, weights, path.horizon);
}

Vec2 queue_at(const SamplePath& path, double t) {
  const std::vector<EventRecord>& ev = path.events;
  if (ev.empty()) return {0.0, 0.0};
  // Last record at or before t.
  const auto after = std::upper_bound(ev.begin(), ev.end(), t,
                                      [](double v, const EventRecord& e) { return v < e.time; });
  if (after == ev.begin()) return ev.front().x;
  const EventRecord& a = *std::prev(after);
  if (path.mode == SimMode::kDiscrete || after == ev.end() || !(after->time > a.time)) return a.x;
  const double f = (t - a.time) / (after->time - a.time);
  return {a.x[0] + (after->x[0] - a.x[0]) * f, a.x[1] + (after->x[1] - a.x[1]) * f};
}

}  // namespace tlc
