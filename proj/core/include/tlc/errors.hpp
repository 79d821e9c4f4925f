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

#ifndef TLC_ERRORS_HPP_
#define TLC_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tlc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or configuration value violates a documented invariant.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A hybrid-state invariant was violated (e.g. two running clocks).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// The event loop failed to make progress or produced an impossible state.
class SimulationError : public Error {
 public:
  using Error::Error;
};

/// Derivative propagation hit a degenerate event (zero-rate crossing,
/// unknown inducing event). Carries the index of the offending event.
class EstimatorError : public Error {
 public:
  static constexpr std::size_t kNoIndex = static_cast<std::size_t>(-1);

  explicit EstimatorError(const std::string& reason,
                          std::size_t event_index = kNoIndex)
      : Error(event_index == kNoIndex
                  ? reason
                  : reason + " (event #" + std::to_string(event_index) + ")"),
        reason_(reason),
        event_index_(event_index) {}

  const std::string& reason() const noexcept { return reason_; }
  std::size_t event_index() const noexcept { return event_index_; }

 private:
  std::string reason_;
  std::size_t event_index_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace tlc

#endif  // TLC_ERRORS_HPP_
