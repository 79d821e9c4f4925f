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

// Vehicle-granular simulator. Each road is a single-server queue whose server
// only works while the road is green; a red light preempts the vehicle in
// service, which restarts its headway on the next green.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "rng.hpp"
#include "tlc/errors.hpp"
#include "tlc/sim.hpp"

namespace tlc::detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct EpochGuards {
  std::array<bool, 2> zeta{false, false};
  std::array<bool, 2> gamma{false, false};
  bool lambda = false;
  bool mu = false;
};

class DiscreteSimulator {
 public:
  explicit DiscreteSimulator(const SimConfig& config)
      : cfg_(config),
        arrival_rng_{std::mt19937_64(derive_seed(config.seed, 1)),
                     std::mt19937_64(derive_seed(config.seed, 2))},
        service_rng_(derive_seed(config.seed, 3)) {}

  SamplePath run() {
    path_.mode = SimMode::kDiscrete;
    path_.events.reserve(estimated_event_count());
    green_ = cfg_.initial_green;
    green_start_ = 0.0;
    for (std::size_t n = 0; n < 2; ++n) {
      count_[n] = std::floor(cfg_.initial_queue[n]);
      above_[n] = count_[n] >= cfg_.thresholds[n];
      next_arrival_[n] = draw_interarrival(n, 0.0);
    }
    log(EventKind::kStart, Road::kOne);
    for (Road r : kRoads) {
      if (count_[idx(r)] > 0) open_nep(r, NepCause::kRateOnset);
    }
    if (count_[idx(green_)] > 0) next_departure_ = now_ + draw_service();

    const double horizon = cfg_.stop.horizon > 0.0 ? cfg_.stop.horizon : kInf;
    while (true) {
      const double t_lambda = lambda_pending_ ? green_start_ + theta_min() : kInf;
      const double t_mu = green_start_ + theta_max();
      const double t_next = std::min({next_arrival_[0], next_arrival_[1], next_departure_,
                                      t_lambda, t_mu});
      if (horizon <= t_next) {
        now_ = horizon;
        break;
      }
      now_ = t_next;
      EpochGuards guards;
      process_vehicles(now_ + kTimeTolerance, guards);
      if (t_lambda <= now_ + kTimeTolerance) {
        guards.lambda = true;
        lambda_pending_ = false;
        log(EventKind::kLambda, green_);
      }
      if (t_mu <= now_ + kTimeTolerance) {
        guards.mu = true;
        log(EventKind::kMu, green_);
      }
      if (decide(guards) && cfg_.stop.switches > 0 &&
          path_.switch_count >= cfg_.stop.switches) {
        break;
      }
    }
    finish();
    return std::move(path_);
  }

 private:
  std::size_t estimated_event_count() const {
    if (cfg_.stop.switches <= 0) return 1024;
    const double cycle = 0.5 * (cfg_.cycles.theta_min[0] + cfg_.cycles.theta_max[0]);
    const double load = cfg_.arrival_rate[0] + cfg_.arrival_rate[1];
    const double estimate = static_cast<double>(cfg_.stop.switches) * cycle * (2.0 * load + 0.5);
    return static_cast<std::size_t>(std::min(estimate, 5e7)) + 64;
  }

  double theta_min() const { return cfg_.cycles.theta_min[idx(green_)]; }
  double theta_max() const { return cfg_.cycles.theta_max[idx(green_)]; }

  double draw_interarrival(std::size_t n, double from) {
    const double rate = cfg_.arrival_rate[n];
    if (rate <= 0.0) return kInf;
    std::exponential_distribution<double> dist(rate);
    return from + dist(arrival_rng_[n]);
  }

  double draw_service() {
    if (cfg_.departures == DepartureProcess::kDeterministic) return 1.0 / cfg_.departure_rate;
    std::exponential_distribution<double> dist(cfg_.departure_rate);
    return dist(service_rng_);
  }

  Vec2 clocks() const {
    Vec2 z{0.0, 0.0};
    z[idx(green_)] = now_ - green_start_;
    return z;
  }

  EventRecord& log(EventKind kind, Road road) {
    EventRecord& rec = path_.events.emplace_back();
    rec.time = now_;
    rec.kind = kind;
    rec.road = road;
    rec.x = count_;
    rec.z = clocks();
    if (kind == EventKind::kLambda) rec.z[idx(green_)] = theta_min();
    if (kind == EventKind::kMu) rec.z[idx(green_)] = theta_max();
    rec.green = green_;
    return rec;
  }

  void open_nep(Road r, NepCause cause) {
    const std::size_t n = idx(r);
    in_nep_[n] = true;
    red_empty_after_switch_[n] = false;
    path_.neps[n].push_back(Nep{now_, kInf, {}, false});
    log(EventKind::kNepStart, r).cause = cause;
  }

  void close_nep(Road r) {
    const std::size_t n = idx(r);
    in_nep_[n] = false;
    Nep& nep = path_.neps[n].back();
    nep.end = now_;
    nep.closed = true;
    log(EventKind::kNepEnd, r);
  }

  // Arrivals and departures due by `limit`, in time order. Arrivals win exact
  // ties with departures.
  void process_vehicles(double limit, EpochGuards& guards) {
    while (true) {
      const std::size_t first = next_arrival_[0] <= next_arrival_[1] ? 0 : 1;
      const double t_arr = next_arrival_[first];
      if (t_arr <= limit && t_arr <= next_departure_) {
        arrive(road_at(first), t_arr, guards);
      } else if (next_departure_ <= limit) {
        depart(guards);
      } else {
        return;
      }
    }
  }

  void arrive(Road r, double t_arrival, EpochGuards& guards) {
    const std::size_t n = idx(r);
    path_.arrivals[n].push_back(t_arrival);
    const bool was_empty = count_[n] == 0.0;
    count_[n] += 1.0;
    if (was_empty) {
      NepCause cause = NepCause::kRateSign;
      if (r != green_) {
        cause = red_empty_after_switch_[n] ? NepCause::kSwitch : NepCause::kRateOnset;
      }
      open_nep(r, cause);
      if (r == green_ && next_departure_ == kInf) {
        next_departure_ = t_arrival + draw_service();
      }
    }
    log(EventKind::kArrival, r);
    if (!above_[n] && count_[n] >= cfg_.thresholds[n]) {
      above_[n] = true;
      guards.zeta[n] = true;
      log(EventKind::kZeta, r);
    }
    next_arrival_[n] = draw_interarrival(n, t_arrival);
  }

  void depart(EpochGuards& guards) {
    const std::size_t g = idx(green_);
    const double t_departure = next_departure_;
    count_[g] -= 1.0;
    log(EventKind::kDeparture, green_);
    if (above_[g] && count_[g] < cfg_.thresholds[g]) {
      above_[g] = false;
      guards.gamma[g] = true;
      log(EventKind::kGamma, green_);
    }
    if (count_[g] == 0.0) {
      close_nep(green_);
      next_departure_ = kInf;
    } else {
      next_departure_ = t_departure + draw_service();
    }
  }

  // Applies the controller at the end of an epoch. Returns true on a switch.
  bool decide(const EpochGuards& guards) {
    const Region region = region_from_sides(above_[0], above_[1]);
    Vec2 z = clocks();
    if (guards.lambda) z[idx(green_)] = theta_min();
    if (guards.mu) z[idx(green_)] = theta_max();
    // A zero clock only happens at the switch instant; keep it positive so
    // the controller reads the green road from the clocks.
    z[idx(green_)] = std::max(z[idx(green_)], std::numeric_limits<double>::min());
    if (control_decision(region, z, cfg_.cycles, green_) == green_) return false;

    const Road g = green_;
    const Road o = other(g);
    GuardKind trigger;
    Road trigger_road = g;
    if (guards.mu) {
      trigger = GuardKind::kMu;
    } else if (guards.gamma[idx(g)]) {
      trigger = GuardKind::kGamma;
    } else if (guards.lambda) {
      trigger = GuardKind::kLambda;
    } else if (guards.zeta[idx(o)]) {
      trigger = GuardKind::kZeta;
      trigger_road = o;
    } else {
      std::ostringstream os;
      os << "controller switched without a guard event at t=" << now_ << " region "
         << to_string(region) << " x=(" << count_[0] << ", " << count_[1] << ")";
      throw SimulationError(os.str());
    }
    switch_light(trigger, trigger_road);
    return true;
  }

  void switch_light(GuardKind trigger, Road trigger_road) {
    const Road g = green_;
    const Road o = other(g);
    const std::int64_t j = ++path_.switch_count;
    for (Road r : kRoads) {
      if (in_nep_[idx(r)]) path_.neps[idx(r)].back().switch_times.push_back(now_);
    }
    next_departure_ = kInf;
    green_ = o;
    green_start_ = now_;
    lambda_pending_ = true;

    for (EventKind kind : {EventKind::kG2R, EventKind::kR2G}) {
      EventRecord& rec = log(kind, kind == EventKind::kG2R ? g : o);
      rec.trigger = trigger;
      rec.trigger_road = trigger_road;
      rec.switch_index = j;
    }
    red_empty_after_switch_[idx(g)] = count_[idx(g)] == 0.0;
    red_empty_after_switch_[idx(o)] = false;
    if (count_[idx(o)] > 0.0) next_departure_ = now_ + draw_service();
  }

  void finish() {
    log(EventKind::kEnd, green_);
    path_.horizon = now_;
  }

  const SimConfig& cfg_;
  std::array<std::mt19937_64, 2> arrival_rng_;
  std::mt19937_64 service_rng_;
  SamplePath path_;

  double now_ = 0.0;
  Road green_ = Road::kOne;
  double green_start_ = 0.0;
  bool lambda_pending_ = true;
  Vec2 count_{0.0, 0.0};
  std::array<bool, 2> above_{false, false};
  std::array<bool, 2> in_nep_{false, false};
  std::array<bool, 2> red_empty_after_switch_{false, false};
  Vec2 next_arrival_{kInf, kInf};
  double next_departure_ = kInf;
};

}  // namespace

SamplePath simulate_discrete(const SimConfig& config) {
  return DiscreteSimulator(config).run();
}

}  // namespace tlc::detail
