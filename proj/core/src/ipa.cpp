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

#include "tlc/ipa.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "tlc/errors.hpp"

namespace tlc {
namespace {

bool is_switch_trigger(GuardKind kind) {
  return kind == GuardKind::kZeta || kind == GuardKind::kGamma || kind == GuardKind::kLambda ||
         kind == GuardKind::kMu;
}

std::string describe(GuardKind kind, Road n, double rate) {
  std::ostringstream os;
  os << to_string(kind) << "_" << number(n) << " with net rate " << rate;
  return os.str();
}

}  // namespace

std::string_view to_string(PhaseShift mode) {
  switch (mode) {
    case PhaseShift::kNone: return "none";
    case PhaseShift::kTerminal: return "terminal";
    case PhaseShift::kTimeAverage: return "time_average";
  }
  return "?";
}

Vec2 switch_time_derivative(GuardKind trigger, Road n, double alpha_n, double h_n,
                            const Vec2& x_prime_before, const Vec2& sigma_prime_prev) {
  double rate = 0.0;
  switch (trigger) {
    case GuardKind::kZeta:
      rate = alpha_n;
      if (!(rate > 0.0)) {
        throw EstimatorError("degenerate crossing from below: " + describe(trigger, n, rate));
      }
      break;
    case GuardKind::kGamma:
      rate = alpha_n - h_n;
      if (rate == 0.0) {
        throw EstimatorError("degenerate crossing from above: " + describe(trigger, n, rate));
      }
      break;
    case GuardKind::kLambda:
    case GuardKind::kMu:
      return sigma_prime_prev;
    default:
      throw EstimatorError(std::string("light switch induced by ") +
                           std::string(to_string(trigger)));
  }
  Vec2 sigma{};
  for (std::size_t i = 0; i < 2; ++i) {
    const double unit = idx(n) == i ? 1.0 : 0.0;
    sigma[i] = (unit - x_prime_before[i]) / rate;
  }
  return sigma;
}

DerivativeState apply_event(const DerivativeState& state, const EventRecord& event,
                            const EventRules& rules) {
  DerivativeState out = state;
  const std::size_t n = idx(event.road);
  Vec2& xp = out.x_prime[n];
  switch (event.kind) {
    case EventKind::kG2R:
    case EventKind::kR2G: {
      if (!is_switch_trigger(event.trigger)) {
        throw EstimatorError(std::string("light switch induced by ") +
                             std::string(to_string(event.trigger)));
      }
      if (event.switch_index != state.last_switch_index) {
        const std::size_t tr = idx(event.trigger_road);
        double alpha_tr = event.alpha[tr];
        if (event.trigger == GuardKind::kGamma && rules.gamma_margin > 0.0) {
          alpha_tr = std::min(alpha_tr, event.h[tr] - rules.gamma_margin);
        }
        out.sigma_prime = switch_time_derivative(event.trigger, event.trigger_road, alpha_tr,
                                                 event.h[tr], state.x_prime[tr],
                                                 state.sigma_prime);
        out.last_switch_index = event.switch_index;
      }
      const Vec2& sp = out.sigma_prime;
      const double alpha = event.alpha[n];
      const double h = event.h[n];
      if (event.kind == EventKind::kG2R) {
        const bool burst = rules.green_bursts_empty && state.green_burst[n] && alpha <= h;
        const double rate = event.x[n] > 0.0 && !burst ? h : alpha;
        for (std::size_t i = 0; i < 2; ++i) xp[i] -= rate * sp[i];
        out.green_burst[n] = false;
      } else {
        const bool empty_absorbed = event.x[n] == 0.0 && alpha > 0.0 && alpha <= h;
        const double rate = empty_absorbed ? alpha : h;
        for (std::size_t i = 0; i < 2; ++i) xp[i] += rate * sp[i];
      }
      break;
    }
    case EventKind::kNepEnd:
      xp = {0.0, 0.0};
      out.green_burst[n] = false;
      break;
    case EventKind::kNepStart:
      switch (event.cause) {
        case NepCause::kSwitch:
          for (std::size_t i = 0; i < 2; ++i) xp[i] = -event.alpha[n] * state.sigma_prime[i];
          break;
        case NepCause::kRateSign:
        case NepCause::kRateOnset:
          xp = {0.0, 0.0};
          out.green_burst[n] = event.cause == NepCause::kRateSign;
          break;
        case NepCause::kNone:
          throw EstimatorError("non-empty period start without an inducing event");
      }
      break;
    default:
      break;
  }
  return out;
}

void NepAccumulator::extend(double t, const Vec2& x_prime) {
  if (t > last_) segments_.push_back({t - last_, x_prime});
  last_ = std::max(last_, t);
}

double NepAccumulator::total_duration() const {
  double total = 0.0;
  for (const NepSegment& seg : segments_) total += seg.duration;
  return total;
}

Vec2 nep_cost_derivative(const NepAccumulator& acc) {
  Vec2 d{0.0, 0.0};
  for (const NepSegment& seg : acc.segments()) {
    for (std::size_t i = 0; i < 2; ++i) d[i] += seg.x_prime[i] * seg.duration;
  }
  return d;
}

GradientEstimate estimate_gradient(const SamplePath& path, const Vec2& weights, double horizon,
                                   const EstimatorOptions& options) {
  GradientEstimate result;
  result.horizon = horizon;
  if (!(horizon > 0.0)) return result;

  const EventRules& rules = path.mode == SimMode::kDiscrete ? options.discrete : options.fluid;

  DerivativeState state;
  std::array<std::optional<NepAccumulator>, 2> open;
  Vec2 total{0.0, 0.0};
  // Sum of the removed shifts c, and of c * x_n at the switch where each was
  // removed.
  Vec2 shift_sum{0.0, 0.0};
  Mat2 shift_at{};

  auto close = [&](std::size_t n, double t, bool truncated) {
    NepAccumulator& acc = *open[n];
    acc.extend(t, state.x_prime[n]);
    const Vec2 d = nep_cost_derivative(acc);
    for (std::size_t i = 0; i < 2; ++i) total[i] += weights[n] * d[i];
    if (options.keep_contributions) {
      result.contributions.push_back({acc.road(), acc.start(), t, truncated, d});
    }
    open[n].reset();
  };

  // Fluid slope of road r just before the switch recorded by `ev`.
  auto slope_before = [&](const EventRecord& ev, std::size_t r) {
    const std::size_t green = ev.kind == EventKind::kG2R ? idx(ev.road) : 1 - idx(ev.road);
    if (r != green) return ev.alpha[r];
    const bool burst = rules.green_bursts_empty && state.green_burst[r] && ev.alpha[r] <= ev.h[r];
    return ev.x[r] > 0.0 && !burst ? ev.alpha[r] - ev.h[r] : 0.0;
  };

  const std::vector<EventRecord>& events = path.events;
  for (std::size_t k = 0; k < events.size(); ++k) {
    const EventRecord& ev = events[k];
    if (ev.time > horizon) break;
    const std::size_t n = idx(ev.road);
    const double t = ev.time;

    const bool new_switch = (ev.kind == EventKind::kG2R || ev.kind == EventKind::kR2G) &&
                            ev.switch_index != state.last_switch_index;
    if (rules.phase_shift != PhaseShift::kNone && new_switch) {
      const Vec2 c = state.sigma_prime;
      for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t i = 0; i < 2; ++i) shift_at[r][i] += c[i] * ev.x[r];
        const double slope = slope_before(ev, r);
        if (!open[r] || slope == 0.0) continue;
        open[r]->extend(t, state.x_prime[r]);
        for (std::size_t i = 0; i < 2; ++i) state.x_prime[r][i] += slope * c[i];
      }
      for (std::size_t i = 0; i < 2; ++i) shift_sum[i] += c[i];
      state.sigma_prime = {0.0, 0.0};
    }

    DerivativeState next;
    try {
      next = apply_event(state, ev, rules);
    } catch (const EstimatorError& e) {
      throw EstimatorError(e.reason(), k);
    }
    // Close the running segment of any period whose derivative changes here.
    for (std::size_t r = 0; r < 2; ++r) {
      if (open[r] && next.x_prime[r] != state.x_prime[r]) open[r]->extend(t, state.x_prime[r]);
    }

    switch (ev.kind) {
      case EventKind::kNepStart:
        // A period already opened at its inducing switch keeps that derivative.
        if (!open[n]) {
          open[n].emplace(ev.road, t);
          state = next;
        }
        break;
      case EventKind::kNepEnd:
        state = next;
        if (open[n]) close(n, t, false);
        break;
      case EventKind::kG2R:
        state = next;
        // An empty road turning red starts queueing at the switch itself.
        if (!open[n] && ev.x[n] == 0.0 && ev.alpha[n] > 0.0) open[n].emplace(ev.road, t);
        break;
      case EventKind::kR2G:
        state = next;
        // An empty road turning green stays empty: the period (if any) ends.
        if (ev.x[n] == 0.0) {
          if (open[n]) close(n, t, false);
          state.x_prime[n] = {0.0, 0.0};
        }
        break;
      default:
        state = next;
        break;
    }

    if (options.check_invariants) {
      for (std::size_t r = 0; r < 2; ++r) {
        if (!open[r] && (state.x_prime[r][0] != 0.0 || state.x_prime[r][1] != 0.0)) {
          throw EstimatorError("non-zero state derivative outside a non-empty period", k);
        }
      }
    }
  }
  for (std::size_t r = 0; r < 2; ++r) {
    if (open[r]) close(r, horizon, true);
  }

  if (rules.phase_shift != PhaseShift::kNone) {
    const Vec2 x_end = queue_at(path, horizon);
    for (std::size_t r = 0; r < 2; ++r) {
      Vec2 unit{0.0, 0.0};
      unit[r] = 1.0;
      const double level =
          rules.phase_shift == PhaseShift::kTerminal ? x_end[r] : sample_cost(path, unit, horizon);
      for (std::size_t i = 0; i < 2; ++i) {
        total[i] += weights[r] * (shift_at[r][i] - shift_sum[i] * level);
      }
    }
  }
  for (std::size_t i = 0; i < 2; ++i) result.dL_ds[i] = total[i] / horizon;
  return result;
}

GradientEstimate estimate_gradient(const SamplePath& path, const Vec2& weights) {
  return estimate_gradient(path, weights, path.horizon);
}

}  // namespace tlc
