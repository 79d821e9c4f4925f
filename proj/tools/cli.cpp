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

#include "tlc_tools/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "tlc/config.hpp"
#include "tlc/errors.hpp"
#include "tlc/experiments.hpp"
#include "tlc/io.hpp"
#include "tlc/ipa.hpp"
#include "tlc/optimizer.hpp"
#include "tlc/sim.hpp"

namespace tlc::cli {
namespace {

namespace fs = std::filesystem;

constexpr std::int64_t kFastSwitches = 1000;

class IoError : public Error {
 public:
  using Error::Error;
};

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> s1;
  std::optional<double> s2;
  std::optional<std::int64_t> switches;
  std::optional<unsigned> jobs;
  std::optional<std::string> out_dir;
  bool fast = false;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("-c,--config", o.config, "config file or built-in scenario name")->required();
  sub->add_option("--seed", o.seed, "base seed of the subcommand");
  sub->add_option("--s1", o.s1, "threshold of road 1");
  sub->add_option("--s2", o.s2, "threshold of road 2");
  sub->add_option("--switches", o.switches, "light switches per sample path");
  sub->add_option("-j,--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("-o,--out", o.out_dir, "output directory");
  sub->add_flag("--fast", o.fast, "short paths (1000 switches)");
}

RunConfig effective_config(const Overrides& o) {
  RunConfig c = resolve_run_config(o.config);
  if (o.fast) c.sim.stop.switches = kFastSwitches;
  if (o.switches) c.sim.stop.switches = *o.switches;
  if (o.jobs) c.jobs = *o.jobs;
  if (const char* env = std::getenv("TLC_OUTPUT_DIR"); env && *env) c.output_dir = env;
  if (o.out_dir) c.output_dir = *o.out_dir;
  if (o.s1 || o.s2) {
    const ThresholdVector s(o.s1.value_or(c.sim.thresholds[0]),
                            o.s2.value_or(c.sim.thresholds[1]));
    c.sim.thresholds = s;
    c.s0 = {s};
  }
  if (o.seed) {
    c.sim.seed = *o.seed;
    c.seed0 = *o.seed;
    c.surface_seed = *o.seed;
  }
  c.validate();
  return c;
}

fs::path output_file(const RunConfig& c, const std::string& stem) {
  const fs::path dir(c.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir / (c.name + "_" + stem);
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::trunc) {
  std::ofstream out(path, std::ios::out | mode);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string tag(double v) { return format_number(v); }

std::string format_fixed(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

int cmd_simulate(const Overrides& o, std::ostream& log) {
  const RunConfig c = effective_config(o);
  const SamplePath path = simulate(c.sim);
  const double J = sample_cost(path, c.sim.weights);
  const fs::path file = output_file(c, "events_seed" + std::to_string(c.sim.seed) + ".csv");
  std::ofstream out = open_out(file);
  write_event_log(out, path, {"events", config_hash(c), c.sim.seed});
  finish(out, file);
  log << "simulate " << c.name << " s=(" << tag(c.sim.thresholds[0]) << ", "
      << tag(c.sim.thresholds[1]) << ") seed=" << c.sim.seed << " events=" << path.events.size()
      << " T=" << tag(path.horizon) << " cost=" << tag(J) << " -> " << file.string() << "\n";
  return kOk;
}

int cmd_gradient(const Overrides& o, int replications, std::ostream& log) {
  const RunConfig c = effective_config(o);
  if (replications < 1) throw ConfigError("--replications must be at least 1");
  const fs::path file = output_file(c, "gradients.csv");
  const bool fresh = !fs::exists(file) || fs::file_size(file) == 0;
  std::ofstream out = open_out(file, std::ios::app);
  if (fresh) {
    write_header(out, {"gradients", config_hash(c), c.sim.seed});
    out << kGradientColumns << "\n";
  }
  EstimatorOptions options = c.estimator;
  options.check_invariants = true;
  Vec2 mean{0.0, 0.0};
  for (int r = 0; r < replications; ++r) {
    SimConfig sim = c.sim;
    sim.seed = c.sim.seed + static_cast<std::uint64_t>(r);
    const SamplePath path = simulate(sim);
    const GradientEstimate g = estimate_gradient(path, sim.weights, path.horizon, options);
    write_gradient_record(out, sim.thresholds, g, sim.seed);
    mean[0] += g.dL_ds[0] / replications;
    mean[1] += g.dL_ds[1] / replications;
  }
  finish(out, file);
  log << "gradient " << c.name << " s=(" << tag(c.sim.thresholds[0]) << ", "
      << tag(c.sim.thresholds[1]) << ") seed=" << c.sim.seed << " replications=" << replications
      << " dL/ds=(" << tag(mean[0]) << ", " << tag(mean[1]) << ") -> " << file.string() << "\n";
  return kOk;
}

int cmd_optimize(const Overrides& o, std::ostream& log) {
  const RunConfig c = effective_config(o);
  std::vector<ThresholdVector> starts = c.s0;
  if (starts.empty()) starts.push_back(c.sim.thresholds);
  for (const ThresholdVector& s0 : starts) {
    const OptRunRecord run = optimize(c.sim, c.rule, s0, c.seed0, c.optimize_options());
    const fs::path file =
        output_file(c, "trajectory_s0_" + tag(s0[0]) + "_" + tag(s0[1]) + ".csv");
    std::ofstream out = open_out(file);
    write_trajectory(out, run, {"trajectory", config_hash(c), c.seed0});
    finish(out, file);
    log << "optimize " << c.name << " s0=(" << tag(s0[0]) << ", " << tag(s0[1]) << ") -> s=("
        << format_fixed(run.s_final[0]) << ", " << format_fixed(run.s_final[1])
        << ") J=" << format_fixed(run.J_initial.mean) << "->" << format_fixed(run.J_final.mean)
        << " R=" << format_fixed(run.reduction) << "% iterations=" << run.iterations.size()
        << (run.converged ? " converged" : "") << " -> " << file.string() << "\n";
  }
  return kOk;
}

int cmd_surface(const Overrides& o, std::ostream& log) {
  const RunConfig c = effective_config(o);
  const CostSurface surface =
      brute_force_surface(c.sim, c.grid, c.surface_replications, c.surface_seed, c.jobs);
  const fs::path file = output_file(c, "surface.csv");
  std::ofstream out = open_out(file);
  write_surface_matrix(out, surface, {"surface", config_hash(c), c.surface_seed});
  finish(out, file);
  log << "surface " << c.name << " points=" << surface.mean_cost.size()
      << " replications=" << surface.replications << " argmin=(" << tag(surface.argmin[0])
      << ", " << tag(surface.argmin[1]) << ") min_cost=" << format_fixed(surface.min_cost)
      << " -> " << file.string() << "\n";
  return kOk;
}

int cmd_scenario(const Overrides& o, bool with_surface, std::ostream& log) {
  const RunConfig c = effective_config(o);
  if (c.scenario.empty()) throw ConfigError("[run] scenario must name a built-in scenario");
  ScenarioSpec spec = builtin_scenario(c.scenario);
  if (o.s1 || o.s2) {
    for (ReferenceRow& row : spec.rows) row.s0 = c.s0.front();
  }
  ScenarioRunOptions options;
  options.rule = c.rule;
  options.optimize = c.optimize_options();
  options.grid = c.grid;
  options.surface_replications = c.surface_replications;
  options.surface_seed = c.surface_seed;
  options.seed0 = c.seed0;
  options.with_surface = with_surface;
  const ScenarioReport report = run_scenario(spec, c.sim, options);

  const FileHeader header{"report", config_hash(c), c.seed0};
  const fs::path text = output_file(c, "report.txt");
  std::ofstream out = open_out(text);
  write_report_text(out, report, header);
  finish(out, text);
  const fs::path csv = output_file(c, "report.csv");
  out = open_out(csv);
  write_report_csv(out, report, header);
  finish(out, csv);
  if (report.surface) {
    const fs::path file = output_file(c, "surface.csv");
    out = open_out(file);
    write_surface_matrix(out, *report.surface, {"surface", config_hash(c), c.surface_seed});
    finish(out, file);
  }
  for (const ScenarioRowResult& row : report.rows) {
    const ThresholdVector& s0 = row.reference.s0;
    const fs::path file =
        output_file(c, "trajectory_s0_" + tag(s0[0]) + "_" + tag(s0[1]) + ".csv");
    out = open_out(file);
    write_trajectory(out, row.run, {"trajectory", config_hash(c), c.seed0});
    finish(out, file);
  }

  log << "scenario " << spec.name;
  for (const ScenarioRowResult& row : report.rows) {
    log << " [" << row.reference.source << ": J=" << format_fixed(row.run.J_final.mean)
        << " ref " << format_fixed(row.reference.J_ipa) << "]";
  }
  if (report.surface) {
    log << " BF min=" << format_fixed(report.surface->min_cost) << " at ("
        << tag(report.surface->argmin[0]) << ", " << tag(report.surface->argmin[1]) << ")";
  }
  log << " -> " << text.string() << "\n";
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasi-dynamic traffic light control: simulation, gradient estimation and "
               "threshold optimization",
               "tlc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tlc 0.1.0");

  Overrides o;
  int replications = 1;
  bool no_surface = false;
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "write one sample path's event log");
  CLI::App* gradient_cmd = app.add_subcommand("gradient", "append IPA gradient records");
  CLI::App* optimize_cmd = app.add_subcommand("optimize", "gradient descent over thresholds");
  CLI::App* surface_cmd = app.add_subcommand("surface", "brute-force cost surface");
  CLI::App* scenario_cmd =
      app.add_subcommand("scenario", "optimize and compare with reference tables");
  for (CLI::App* sub : {simulate_cmd, gradient_cmd, optimize_cmd, surface_cmd, scenario_cmd}) {
    add_common(sub, o);
  }
  gradient_cmd->add_option("-r,--replications", replications, "paths, seeds seed..seed+r-1");
  scenario_cmd->add_flag("--no-surface", no_surface, "skip the brute-force surface");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (simulate_cmd->parsed()) return cmd_simulate(o, out);
    if (gradient_cmd->parsed()) return cmd_gradient(o, replications, out);
    if (optimize_cmd->parsed()) return cmd_optimize(o, out);
    if (surface_cmd->parsed()) return cmd_surface(o, out);
    return cmd_scenario(o, !no_surface, out);
  } catch (const ConfigError& e) {
    err << "tlc: invalid configuration: " << e.what() << "\n";
    return kBadConfig;
  } catch (const InvariantViolation& e) {
    err << "tlc: invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const EstimatorError& e) {
    err << "tlc: estimator fault: " << e.what() << "\n";
    return kEstimatorFault;
  } catch (const SimulationError& e) {
    err << "tlc: simulation fault: " << e.what() << "\n";
    return kSimulationFault;
  } catch (const IoError& e) {
    err << "tlc: " << e.what() << "\n";
    return kIoFailure;
  } catch (const DomainError& e) {
    err << "tlc: " << e.what() << "\n";
    return kDomain;
  } catch (const std::exception& e) {
    err << "tlc: internal error: " << e.what() << "\n";
    return kInternal;
  }
}

int run_cli(int argc, const char* const* argv) { return run_cli(argc, argv, std::cout, std::cerr); }

}  // namespace tlc::cli
