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

#include "tlc/io.hpp"

#include <charconv>
#include <cstdio>
#include <optional>

#include "tlc/config.hpp"

namespace tlc {
namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pair(const Vec2& v, int digits) {
  return "[" + fixed(v[0], digits) + ", " + fixed(v[1], digits) + "]";
}

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

struct Quantity {
  std::string source;
  std::string row;
  std::string name;
  std::optional<double> measured;
  std::optional<double> reference;
};

std::vector<Quantity> quantities(const ScenarioReport& report) {
  std::vector<Quantity> q;
  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    const ScenarioRowResult& r = report.rows[k];
    const ReferenceRow& ref = r.reference;
    const std::string row =
        "s0=" + format_number(ref.s0[0]) + ";" + format_number(ref.s0[1]);
    const OptRunRecord& run = r.run;
    q.push_back({ref.source, row, "J0", run.J_initial.mean, ref.J0});
    q.push_back({ref.source, row, "s1_ipa", run.s_final[0], ref.s_ipa[0]});
    q.push_back({ref.source, row, "s2_ipa", run.s_final[1], ref.s_ipa[1]});
    q.push_back({ref.source, row, "J_ipa", run.J_final.mean, ref.J_ipa});
    q.push_back({ref.source, row, "R", run.reduction, ref.R});
    std::optional<double> s1_bf;
    std::optional<double> s2_bf;
    std::optional<double> j_bf;
    if (report.surface) {
      s1_bf = report.surface->argmin[0];
      s2_bf = report.surface->argmin[1];
      j_bf = report.surface->min_cost;
    }
    q.push_back({ref.source, row, "s1_bf", s1_bf, ref.s_bf[0]});
    q.push_back({ref.source, row, "s2_bf", s2_bf, ref.s_bf[1]});
    q.push_back({ref.source, row, "J_bf", j_bf, ref.J_bf});
    if (report.spec.comparison) {
      const MethodComparison& c = *report.spec.comparison;
      q.push_back({c.source, row, "J1", c.J1, c.J1});
      q.push_back({c.source, row, "R2", cost_reduction(c.J1, c.J2), c.R2});
      if (k < report.r3.size()) q.push_back({c.source, row, "R3", report.r3[k], c.R3});
    }
  }
  return q;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_header(std::ostream& out, const FileHeader& header) {
  out << "# tlc " << header.kind << " config_hash=" << hash_hex(header.config_hash)
      << " seed=" << header.seed << "\n";
}

void write_event_log(std::ostream& out, const SamplePath& path, const FileHeader& header) {
  write_header(out, header);
  out << "time,kind,road,x1,x2,z1,z2,u\n";
  for (const EventRecord& e : path.events) {
    out << format_number(e.time) << ',' << to_string(e.kind) << ',' << number(e.road) << ','
        << format_number(e.x[0]) << ',' << format_number(e.x[1]) << ','
        << format_number(e.z[0]) << ',' << format_number(e.z[1]) << ',' << number(e.green)
        << '\n';
  }
}

void write_gradient_record(std::ostream& out, const ThresholdVector& s,
                           const GradientEstimate& estimate, std::uint64_t seed) {
  out << format_number(s[0]) << ',' << format_number(s[1]) << ','
      << format_number(estimate.dL_ds[0]) << ',' << format_number(estimate.dL_ds[1]) << ','
      << format_number(estimate.horizon) << ',' << seed << '\n';
}

void write_trajectory(std::ostream& out, const OptRunRecord& record, const FileHeader& header) {
  write_header(out, header);
  out << "l,s1,s2,H1,H2,J,seed\n";
  for (const OptIteration& it : record.iterations) {
    out << it.l << ',' << format_number(it.s[0]) << ',' << format_number(it.s[1]) << ','
        << format_number(it.H[0]) << ',' << format_number(it.H[1]) << ','
        << format_number(it.J) << ',' << it.seed << '\n';
  }
  out << "# final s1=" << format_number(record.s_final[0])
      << " s2=" << format_number(record.s_final[1])
      << " J_initial=" << format_number(record.J_initial.mean)
      << " J_final=" << format_number(record.J_final.mean)
      << " reduction=" << format_number(record.reduction)
      << " converged=" << (record.converged ? "true" : "false") << '\n';
}

void write_surface_matrix(std::ostream& out, const CostSurface& surface,
                          const FileHeader& header) {
  write_header(out, header);
  out << "# replications=" << surface.replications << " argmin=" << format_number(surface.argmin[0])
      << ';' << format_number(surface.argmin[1]) << " min_cost=" << format_number(surface.min_cost)
      << '\n';
  out << "s1\\s2";
  for (double v : surface.s2_values) out << ',' << format_number(v);
  out << '\n';
  for (std::size_t i = 0; i < surface.s1_values.size(); ++i) {
    out << format_number(surface.s1_values[i]);
    for (std::size_t j = 0; j < surface.s2_values.size(); ++j) {
      out << ',' << format_number(surface.at(i, j));
    }
    out << '\n';
  }
}

void write_report_text(std::ostream& out, const ScenarioReport& report,
                       const FileHeader& header) {
  write_header(out, header);
  const ScenarioSpec& spec = report.spec;
  out << "scenario " << spec.name << "  1/alpha = " << pair(spec.mean_interarrival, 1)
      << "  theta_min = " << pair(spec.cycles.theta_min, 1)
      << "  theta_max = " << pair(spec.cycles.theta_max, 1) << "  (" << to_string(spec.cycle_mode)
      << ")  N = " << report.switches << "\n\n";

  char line[256];
  std::snprintf(line, sizeof line, "%-16s %-14s %-8s %12s %12s\n", "source", "row", "quantity",
                "measured", "reference");
  out << line;
  for (const Quantity& q : quantities(report)) {
    const std::string measured = q.measured ? fixed(*q.measured, 2) : "-";
    const std::string reference = q.reference ? fixed(*q.reference, 2) : "-";
    std::snprintf(line, sizeof line, "%-16s %-14s %-8s %12s %12s\n", q.source.c_str(),
                  q.row.c_str(), q.name.c_str(), measured.c_str(), reference.c_str());
    out << line;
  }
}

void write_report_csv(std::ostream& out, const ScenarioReport& report, const FileHeader& header) {
  write_header(out, header);
  out << "scenario,source,row,quantity,measured,reference\n";
  for (const Quantity& q : quantities(report)) {
    out << report.spec.name << ',' << q.source << ',' << q.row << ',' << q.name << ','
        << opt(q.measured) << ',' << opt(q.reference) << '\n';
  }
}

}  // namespace tlc
