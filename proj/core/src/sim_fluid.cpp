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

// Fluid simulator: queue contents move linearly between events and every
// guard time is the root of a linear function, so the sample path is exact up
// to floating-point rounding.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tlc/errors.hpp"
#include "tlc/sim.hpp"

namespace tlc::detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStallGap = 1e-12;
constexpr int kMaxStalledEpochs = 64;

struct EpochGuards {
  std::array<bool, 2> zeta{false, false};
  std::array<bool, 2> gamma{false, false};
  bool lambda = false;
  bool mu = false;
};

class FluidSimulator {
 public:
  explicit FluidSimulator(const SimConfig& config) : cfg_(config) {}

  SamplePath run() {
    path_.mode = SimMode::kFluid;
    green_ = cfg_.initial_green;
    x_ = cfg_.initial_queue;
    h_ = {cfg_.departure_rate, cfg_.departure_rate};
    if (cfg_.fluid_schedule.empty()) {
      alpha_ = cfg_.arrival_rate;
    } else {
      alpha_ = cfg_.fluid_schedule.front().alpha;
      next_segment_ = 1;
    }
    for (std::size_t n = 0; n < 2; ++n) above_[n] = x_[n] >= cfg_.thresholds[n];
    log(EventKind::kStart, Road::kOne);
    for (Road r : kRoads) {
      const std::size_t n = idx(r);
      if (x_[n] > 0.0) {
        open_nep(r, NepCause::kRateOnset);
      } else {
        maybe_start_exogenous(r);
      }
    }

    const double horizon = cfg_.stop.horizon > 0.0 ? cfg_.stop.horizon : kInf;
    int stalled = 0;
    while (true) {
      const Candidates next = candidates();
      const double t_next = next.earliest();
      if (horizon <= t_next) {
        advance(horizon);
        break;
      }
      if (t_next - now_ < kStallGap) {
        if (++stalled > kMaxStalledEpochs) throw stall_error();
      } else {
        stalled = 0;
      }
      advance(t_next);
      const double limit = t_next + kTimeTolerance;
      EpochGuards guards;

      // Everything reached under the old rates (crossings, emptying, clocks and
      // the switch they cause) is logged before a rate change at the same
      // instant.
      for (Road r : kRoads) {
        const std::size_t n = idx(r);
        if (next.cross[n] <= limit) cross(r, guards);
      }
      for (Road r : kRoads) {
        const std::size_t n = idx(r);
        if (next.empty[n] <= limit && in_nep_[n]) {
          x_[n] = 0.0;
          close_nep(r);
        }
      }
      if (next.lambda <= limit) {
        guards.lambda = true;
        lambda_pending_ = false;
        log(EventKind::kLambda, green_);
      }
      if (next.mu <= limit) {
        guards.mu = true;
        log(EventKind::kMu, green_);
      }
      if (decide(guards) && cfg_.stop.switches > 0 &&
          path_.switch_count >= cfg_.stop.switches) {
        break;
      }
      if (next.rate_change <= limit) change_rates();
    }
    log(EventKind::kEnd, green_);
    path_.horizon = now_;
    return std::move(path_);
  }

 private:
  struct Candidates {
    double rate_change = kInf;
    Vec2 cross{kInf, kInf};
    Vec2 empty{kInf, kInf};
    double lambda = kInf;
    double mu = kInf;

    double earliest() const {
      return std::min({rate_change, cross[0], cross[1], empty[0], empty[1], lambda, mu});
    }
  };

  double flow(Road r) const {
    const std::size_t n = idx(r);
    if (r != green_) return alpha_[n];
    if (!in_nep_[n] && alpha_[n] <= h_[n]) return 0.0;
    return alpha_[n] - h_[n];
  }

  Candidates candidates() const {
    Candidates c;
    if (next_segment_ < cfg_.fluid_schedule.size()) {
      c.rate_change = std::max(now_, cfg_.fluid_schedule[next_segment_].start);
    }
    for (Road r : kRoads) {
      const std::size_t n = idx(r);
      const double f = flow(r);
      const double s = cfg_.thresholds[n];
      if (!above_[n] && f > 0.0) {
        c.cross[n] = now_ + std::max(0.0, s - x_[n]) / f;
      } else if (above_[n] && f < 0.0) {
        c.cross[n] = now_ + std::max(0.0, x_[n] - s) / -f;
      }
      if (in_nep_[n] && f < 0.0) c.empty[n] = now_ + x_[n] / -f;
    }
    const std::size_t g = idx(green_);
    if (lambda_pending_) c.lambda = green_start_ + cfg_.cycles.theta_min[g];
    c.mu = green_start_ + cfg_.cycles.theta_max[g];
    return c;
  }

  void advance(double t) {
    const double dt = t - now_;
    if (dt > 0.0) {
      for (Road r : kRoads) {
        const std::size_t n = idx(r);
        x_[n] = std::max(0.0, x_[n] + flow(r) * dt);
      }
    }
    now_ = std::max(now_, t);
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
    rec.x = x_;
    rec.z = clocks();
    const std::size_t g = idx(green_);
    if (kind == EventKind::kLambda) rec.z[g] = cfg_.cycles.theta_min[g];
    if (kind == EventKind::kMu) rec.z[g] = cfg_.cycles.theta_max[g];
    rec.green = green_;
    rec.alpha = alpha_;
    rec.h = h_;
    return rec;
  }

  void open_nep(Road r, NepCause cause) {
    const std::size_t n = idx(r);
    in_nep_[n] = true;
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

  // Exogenous start of a non-empty period on an empty road: arrivals begin
  // on red, or exceed capacity on green.
  void maybe_start_exogenous(Road r) {
    const std::size_t n = idx(r);
    if (in_nep_[n] || x_[n] > 0.0) return;
    if (r != green_ && alpha_[n] > 0.0) {
      open_nep(r, NepCause::kRateOnset);
    } else if (r == green_ && alpha_[n] > h_[n]) {
      open_nep(r, NepCause::kRateSign);
    }
  }

  void change_rates() {
    const Vec2 previous = alpha_;
    alpha_ = cfg_.fluid_schedule[next_segment_].alpha;
    ++next_segment_;
    for (Road r : kRoads) {
      if (alpha_[idx(r)] != previous[idx(r)]) log(EventKind::kRateChange, r);
    }
    for (Road r : kRoads) maybe_start_exogenous(r);
  }

  void cross(Road r, EpochGuards& guards) {
    const std::size_t n = idx(r);
    x_[n] = cfg_.thresholds[n];
    above_[n] = !above_[n];
    if (above_[n]) {
      guards.zeta[n] = true;
      log(EventKind::kZeta, r);
    } else {
      guards.gamma[n] = true;
      log(EventKind::kGamma, r);
    }
  }

  bool decide(const EpochGuards& guards) {
    const std::size_t g = idx(green_);
    const Region region = region_from_sides(above_[0], above_[1]);
    Vec2 z = clocks();
    if (guards.lambda) z[g] = cfg_.cycles.theta_min[g];
    if (guards.mu) z[g] = cfg_.cycles.theta_max[g];
    z[g] = std::max(z[g], std::numeric_limits<double>::min());
    if (control_decision(region, z, cfg_.cycles, green_) == green_) return false;

    const Road o = other(green_);
    GuardKind trigger;
    Road trigger_road = green_;
    if (guards.mu) {
      trigger = GuardKind::kMu;
    } else if (guards.gamma[g]) {
      trigger = GuardKind::kGamma;
    } else if (guards.lambda) {
      trigger = GuardKind::kLambda;
    } else if (guards.zeta[idx(o)]) {
      trigger = GuardKind::kZeta;
      trigger_road = o;
    } else {
      std::ostringstream os;
      os << "controller switched without a guard event at t=" << now_ << " region "
         << to_string(region) << " x=(" << x_[0] << ", " << x_[1] << ")";
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
    green_ = o;
    green_start_ = now_;
    lambda_pending_ = true;
    for (EventKind kind : {EventKind::kG2R, EventKind::kR2G}) {
      EventRecord& rec = log(kind, kind == EventKind::kG2R ? g : o);
      rec.trigger = trigger;
      rec.trigger_road = trigger_road;
      rec.switch_index = j;
    }
    // The road turning red starts queueing at once if it was empty.
    if (!in_nep_[idx(g)] && alpha_[idx(g)] > 0.0) open_nep(g, NepCause::kSwitch);
    maybe_start_exogenous(o);
  }

  SimulationError stall_error() const {
    std::ostringstream os;
    os << "event loop stalled at t=" << now_ << ": x=(" << x_[0] << ", " << x_[1]
       << "), green=" << number(green_) << ", clock=" << now_ - green_start_
       << ", above=(" << above_[0] << ", " << above_[1] << ")";
    return SimulationError(os.str());
  }

  const SimConfig& cfg_;
  SamplePath path_;

  double now_ = 0.0;
  Road green_ = Road::kOne;
  double green_start_ = 0.0;
  bool lambda_pending_ = true;
  Vec2 x_{0.0, 0.0};
  Vec2 alpha_{0.0, 0.0};
  Vec2 h_{1.0, 1.0};
  std::size_t next_segment_ = 0;
  std::array<bool, 2> above_{false, false};
  std::array<bool, 2> in_nep_{false, false};
};

}  // namespace

SamplePath simulate_fluid(const SimConfig& config) {
  return FluidSimulator(config).run();
}

}  // namespace tlc::detail
