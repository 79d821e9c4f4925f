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

#include "tlc/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tlc/errors.hpp"

namespace tlc {

ThresholdVector::ThresholdVector(double s1, double s2) : s_{s1, s2} {
  if (!(s1 > 0.0) || !(s2 > 0.0) || !std::isfinite(s1) || !std::isfinite(s2)) {
    std::ostringstream os;
    os << "thresholds must be finite and strictly positive, got (" << s1 << ", "
       << s2 << ")";
    throw ConfigError(os.str());
  }
}

void CycleConfig::validate() const {
  for (std::size_t n = 0; n < 2; ++n) {
    if (!(theta_min[n] > 0.0) || !(theta_min[n] < theta_max[n]) ||
        !std::isfinite(theta_max[n])) {
      std::ostringstream os;
      os << "road " << n + 1 << ": need 0 < theta_min < theta_max, got ["
         << theta_min[n] << ", " << theta_max[n] << "]";
      throw ConfigError(os.str());
    }
  }
}

std::string_view to_string(GuardKind kind) {
  switch (kind) {
    case GuardKind::kZeta: return "zeta";
    case GuardKind::kGamma: return "gamma";
    case GuardKind::kLambda: return "lambda";
    case GuardKind::kMu: return "mu";
    case GuardKind::kEmpty: return "e5";
    case GuardKind::kRateSign: return "e6";
    case GuardKind::kRateOnset: return "e7";
  }
  return "?";
}

Region region_from_sides(bool road1_at_or_above, bool road2_at_or_above) {
  if (road1_at_or_above) return road2_at_or_above ? Region::kX3 : Region::kX2;
  return road2_at_or_above ? Region::kX1 : Region::kX0;
}

Region region_of(const Vec2& x, const ThresholdVector& s) {
  return region_from_sides(x[0] >= s[0], x[1] >= s[1]);
}

std::string_view to_string(Region region) {
  switch (region) {
    case Region::kX0: return "X0";
    case Region::kX1: return "X1";
    case Region::kX2: return "X2";
    case Region::kX3: return "X3";
  }
  return "?";
}

Road control_decision(Region region, const Vec2& z, const CycleConfig& cycles,
                      Road green_if_idle) {
  if (z[0] > 0.0 && z[1] > 0.0) {
    std::ostringstream os;
    os << "both clocks running: z = (" << z[0] << ", " << z[1] << ")";
    throw InvariantViolation(os.str());
  }
  const Road green = z[0] > 0.0 ? Road::kOne : (z[1] > 0.0 ? Road::kTwo : green_if_idle);
  const std::size_t g = idx(green);
  const double clock = z[g];

  if (clock >= cycles.theta_max[g] - kTimeTolerance) return other(green);

  const bool favours_other = (green == Road::kOne && region == Region::kX1) ||
                             (green == Road::kTwo && region == Region::kX2);
  if (favours_other && clock >= cycles.theta_min[g] - kTimeTolerance) return other(green);
  return green;
}

double flow_rate(Road n, const HybridState& state, const FlowRates& rates) {
  const std::size_t i = idx(n);
  if (state.green != n) return rates.alpha[i];
  if (state.x[i] <= 0.0 && rates.alpha[i] <= rates.h[i]) return 0.0;
  return rates.alpha[i] - rates.h[i];
}

double departure_rate(Road n, const HybridState& state, const FlowRates& rates) {
  const std::size_t i = idx(n);
  if (state.green != n) return 0.0;
  if (state.x[i] > 0.0) return rates.h[i];
  return std::min(rates.alpha[i], rates.h[i]);
}

ResetDecision clock_reset_due(Road n, const HybridState& before, const Vec2& x_after,
                              const ThresholdVector& s, const CycleConfig& cycles) {
  const std::size_t i = idx(n);
  const std::size_t o = idx(other(n));
  const double clock = before.z[i];
  const double min_green = cycles.theta_min[i];

  if (clock >= cycles.theta_max[i] - kTimeTolerance) {
    return {true, ResetRule::kRule4, GuardKind::kMu, n};
  }

  const bool other_at_or_above = x_after[o] >= s[o];
  // A crossing from above either jumps strictly below (integer counts) or
  // lands exactly on the threshold (fluid queues).
  const bool own_crossed_down =
      before.x[i] >= s[i] &&
      (x_after[i] < s[i] || (before.x[i] > s[i] && x_after[i] == s[i]));
  if (clock > min_green + kTimeTolerance && own_crossed_down && other_at_or_above) {
    return {true, ResetRule::kRule2, GuardKind::kGamma, n};
  }

  if (std::abs(clock - min_green) <= kTimeTolerance && x_after[i] < s[i] &&
      other_at_or_above) {
    return {true, ResetRule::kRule3, GuardKind::kLambda, n};
  }

  const bool other_crossed_up = before.x[o] < s[o] && x_after[o] >= s[o];
  if (clock > min_green + kTimeTolerance && x_after[i] < s[i] && other_crossed_up) {
    return {true, ResetRule::kRule1, GuardKind::kZeta, other(n)};
  }
  return {};
}

}  // namespace tlc
