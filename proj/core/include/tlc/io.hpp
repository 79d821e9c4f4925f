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

// Plain-text result files. Each starts with a comment line
//
//   # tlc <kind> config_hash=<16 hex digits> seed=<n>
//
// followed by a comma-separated column header and one record per line.
// Numbers use the shortest decimal form that round-trips.

#ifndef TLC_IO_HPP_
#define TLC_IO_HPP_

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "tlc/experiments.hpp"
#include "tlc/ipa.hpp"
#include "tlc/optimizer.hpp"
#include "tlc/sim.hpp"

namespace tlc {

struct FileHeader {
  std::string_view kind;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

std::string format_number(double value);

void write_header(std::ostream& out, const FileHeader& header);

/// Columns time, kind, road, x1, x2, z1, z2, u; u is the green road (1 or 2).
void write_event_log(std::ostream& out, const SamplePath& path, const FileHeader& header);

inline constexpr std::string_view kGradientColumns = "s1,s2,dLds1,dLds2,T,seed";

/// One record of a gradient results file, without header.
void write_gradient_record(std::ostream& out, const ThresholdVector& s,
                           const GradientEstimate& estimate, std::uint64_t seed);

/// Iteration rows (l, s1, s2, H1, H2, J, seed), then `#` summary lines with
/// the initial and final evaluation costs.
void write_trajectory(std::ostream& out, const OptRunRecord& record, const FileHeader& header);

/// First row: "s1\s2" then the s2 grid values; each further row starts with
/// its s1 value followed by the mean costs.
void write_surface_matrix(std::ostream& out, const CostSurface& surface,
                          const FileHeader& header);

/// Aligned columns for people.
void write_report_text(std::ostream& out, const ScenarioReport& report, const FileHeader& header);

/// One comma-separated record per (row, quantity) with measured and
/// reference values and the source table.
void write_report_csv(std::ostream& out, const ScenarioReport& report, const FileHeader& header);

}  // namespace tlc

#endif  // TLC_IO_HPP_
