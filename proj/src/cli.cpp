// Copyright 2026 The allres Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "allres/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>

#include <CLI11.hpp>

#include "allres/config.hpp"
#include "allres/experiments.hpp"
#include "allres/report.hpp"
#include "allres/verify.hpp"

namespace allres {

namespace {

using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw UsageError(what + ": '" + s + "' is not a number");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    out.push_back(s.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

// Options shared by simulate and sweep.
struct Common {
  std::string config_path;
  std::optional<double> dt;
  std::optional<std::string> table2_mode;
  std::optional<int> jobs;
  std::optional<int> nodes;
  std::string out_dir = "allres-out";

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "configuration file (key = value unit)");
    app->add_option("--dt", dt, "RK4 step in ns");
    app->add_option("--table2-mode", table2_mode, "cc-phase table reading: sqrt2 or listed");
    app->add_option("--jobs", jobs, "worker threads");
    app->add_option("--nodes", nodes, "quadrature nodes per angle (>= 5)");
    app->add_option("--out", out_dir, "output directory");
  }

  RunConfig load() const {
    RunConfig cfg = config_path.empty() ? RunConfig() : RunConfig::load(config_path);
    if (dt) cfg.set("dt", format_double(*dt) + " ns");
    if (table2_mode) cfg.set("table2_mode", *table2_mode);
    if (jobs) cfg.set("jobs", std::to_string(*jobs));
    if (nodes) cfg.set("quadrature_nodes", std::to_string(*nodes));
    cfg.gate_params().validate();
    cfg.integrator().validate();
    cfg.quadrature().validate();
    return cfg;
  }
};

ExecutionConfig execution(const RunConfig& cfg) {
  ExecutionConfig exec;
  exec.integrator = cfg.integrator();
  exec.jobs = cfg.jobs();
  return exec;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void write_density(const std::string& dir, const std::string& stem, const CMatrix& m) {
  write_text_file(dir + "/" + stem + "_re.csv", matrix_csv(m.real()));
  write_text_file(dir + "/" + stem + "_im.csv", matrix_csv(m.imag()));
}

struct SimulateArgs {
  Common common;
  std::string gate;
  std::string theta;
  bool unitary_limit = false;
  bool direct = false;
  bool density = false;
  bool density_full = false;
  bool trajectory = false;
  int sample_every = 0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto t0 = Clock::now();
  const GateKind kind = parse_gate_kind(a.gate);
  RunConfig cfg = a.common.load();
  GateParams params = cfg.gate_params();
  if (a.unitary_limit) params = params.unitary_limit();
  ExecutionConfig exec = execution(cfg);
  const QuadratureSpec quad = cfg.quadrature();

  ordered_json report = report_header("simulate", kind, cfg);
  report["unitary_limit"] = a.unitary_limit;
  report["table2_mode"] = std::string(to_string(params.table2_mode));
  const Schedule schedule = build_schedule(kind, params);
  report["schedule"] = schedule_json(schedule);

  const std::string dir = a.common.out_dir;
  std::string line;
  if (!a.theta.empty()) {
    const std::vector<double> thetas = parse_thetas(a.theta);
    IntegratorConfig icfg = exec.integrator;
    icfg.sample_every = a.sample_every;
    const GateReport run = run_gate(kind, params, thetas, icfg);
    report["mode"] = "single";
    report["thetas"] = thetas;
    report["total_duration_ns"] = run.total_duration;
    report["fidelity"] = run.fidelity;
    report["steps"] = diagnostics_json(run.trajectory.steps);
    line = "F=" + fixed(run.fidelity, 6) + ", T=" + fixed(run.total_duration, 2) + " ns";
    const SpaceLayout& layout = run.final_state.layout;
    if (kind == GateKind::SWAP) {
      const double na = expectation(run.final_state, resonator_number(layout, 0)).real();
      const double nb = expectation(run.final_state, resonator_number(layout, 1)).real();
      report["n_a"] = na;
      report["n_b"] = nb;
      line += ", <n_a>=" + fixed(na, 6) + ", <n_b>=" + fixed(nb, 6);
    }
    if (a.trajectory) {
      std::string csv = "t_ns,trace";
      for (int r = 0; r < layout.num_resonators(); ++r) csv += std::string(",n_") + static_cast<char>('a' + r);
      csv += ",p_g,p_e,p_f\n";
      for (std::size_t i = 0; i < run.trajectory.states.size(); ++i) {
        const DensityMatrix& rho = run.trajectory.states[i];
        csv += format_double(run.trajectory.times[i]) + "," + format_double(rho.matrix.trace().real());
        for (int r = 0; r < layout.num_resonators(); ++r) {
          csv += "," + format_double(expectation(rho, resonator_number(layout, r)).real());
        }
        for (int level = 0; level < 3; ++level) {
          csv += "," + format_double(expectation(rho, qutrit_operator(layout, qutrit_projector(level))).real());
        }
        csv += "\n";
      }
      write_text_file(dir + "/trajectory_" + a.gate + ".csv", csv);
    }
  } else {
    report["mode"] = "averaged";
    report["quadrature_nodes"] = quad.nodes_per_angle;
    if (a.direct) {
      const AveragedFidelity avg = average_fidelity_direct(kind, params, quad, exec);
      report["path"] = "direct";
      report["propagations"] = avg.propagations;
      report["total_duration_ns"] = avg.total_duration;
      report["fidelity"] = avg.fidelity;
      report["min_fidelity"] = avg.min_fidelity;
      report["max_fidelity"] = avg.max_fidelity;
      report["steps"] = envelope_json(avg.steps);
      line = "F=" + fixed(avg.fidelity, 6) + ", T=" + fixed(avg.total_duration, 2) + " ns";
    } else {
      const ProcessMatrix ch = reconstruct_channel(kind, params, exec);
      const double f = average_fidelity_channel(ch, kind, quad);
      double leak = 0.0;
      for (int j = 0; j < ch.dim; ++j) leak = std::max(leak, ch.leakage(j, j).real());
      report["path"] = "channel";
      report["propagations"] = ch.propagations;
      report["total_duration_ns"] = ch.total_duration;
      report["fidelity"] = f;
      report["max_basis_leakage"] = leak;
      report["steps"] = envelope_json(ch.steps);
      line = "F=" + fixed(f, 6) + ", T=" + fixed(ch.total_duration, 2) + " ns";
    }
  }

  if (a.density || a.density_full) {
    std::vector<double> thetas = a.theta.empty() ? std::vector<double>(static_cast<std::size_t>(num_resonators(kind)),
                                                                       3.14159265358979323846 / 4)
                                                 : parse_thetas(a.theta);
    const DensityReport dr = density_report(kind, params, thetas, exec.integrator, a.density_full);
    write_density(dir, "density_" + a.gate + "_initial", dr.initial_block);
    write_density(dir, "density_" + a.gate + "_final", dr.final_block);
    if (dr.initial_full) write_density(dir, "density_" + a.gate + "_initial_full", dr.initial_full->matrix);
    if (dr.final_full) write_density(dir, "density_" + a.gate + "_final_full", dr.final_full->matrix);
    report["density_thetas"] = thetas;
    report["density_fidelity"] = dr.fidelity;
  }

  report["wall_time_s"] = seconds_since(t0);
  write_text_file(dir + "/report_" + a.gate + ".json", report.dump(2) + "\n");
  out << line << "\n";
  return kExitOk;
}

struct SweepArgs {
  Common common;
  std::string parameter;
  std::string grid;
  std::string gate = "cphase";
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const auto t0 = Clock::now();
  const SweepParameter param = parse_sweep_parameter(a.parameter);
  const GateKind kind = parse_gate_kind(a.gate);
  const RunConfig cfg = a.common.load();
  SweepSpec spec;
  spec.parameter = param;
  spec.values = parse_grid(a.grid);
  spec.baseline = cfg.gate_params();
  const SweepResult res = sweep(kind, spec, cfg.quadrature(), execution(cfg));

  const std::string unit(sweep_unit(param));
  std::string csv = std::string(to_string(param)) + "_" + (unit == "1/ns" ? "per_ns" : unit) + ",fidelity\n";
  out << to_string(param) << " [" << unit << "]  fidelity\n";
  ordered_json report = report_header("sweep", kind, cfg);
  report["parameter"] = std::string(to_string(param));
  report["unit"] = unit;
  ordered_json rows = ordered_json::array();
  for (const SweepPoint& p : res.points) {
    csv += format_double(p.value) + "," + format_double(p.fidelity) + "\n";
    out << format_double(p.value) << "  " << fixed(p.fidelity, 8) << "\n";
    rows.push_back({{"value", p.value}, {"fidelity", p.fidelity}});
  }
  report["points"] = std::move(rows);
  report["non_increasing"] = res.non_increasing();
  report["strictly_increasing"] = res.strictly_increasing();
  out << "non-increasing in " << to_string(param) << ": " << (res.non_increasing() ? "yes" : "no") << "\n";
  out << "strictly increasing in " << to_string(param) << ": " << (res.strictly_increasing() ? "yes" : "no") << "\n";
  report["wall_time_s"] = seconds_since(t0);
  const std::string stem = a.common.out_dir + "/sweep_" + a.parameter + "_" + a.gate;
  write_text_file(stem + ".csv", csv);
  write_text_file(stem + ".json", report.dump(2) + "\n");
  return kExitOk;
}

struct VerifyArgs {
  bool quick = false;
  std::string fault;
  std::optional<int> jobs;
  std::optional<double> dt;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  VerifyOptions opt;
  opt.quick = a.quick;
  if (!a.fault.empty()) {
    if (a.fault != "step2-area") throw UsageError("unknown fault '" + a.fault + "' (expected step2-area)");
    opt.fault = ScheduleFault::Step2Area;
  }
  if (a.jobs) opt.exec.jobs = *a.jobs;
  if (a.dt) opt.exec.integrator.dt = *a.dt;
  opt.exec.validate();
  int failed = 0;
  int total = 0;
  run_verify(opt, [&](const CheckResult& r) {
    ++total;
    if (!r.passed) ++failed;
    out << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  error=" << sci(r.error) << " tol=" << sci(r.tolerance);
    if (!r.detail.empty()) out << "  (" << r.detail << ")";
    out << "\n" << std::flush;
  });
  out << (total - failed) << "/" << total << " checks passed\n";
  return failed == 0 ? kExitOk : kExitInvariant;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw UsageError("grid must be lo:hi:n, got '" + text + "'");
  const double lo = parse_double(parts[0], "grid lo");
  const double hi = parse_double(parts[1], "grid hi");
  int n = 0;
  const auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), n);
  if (ec != std::errc() || ptr != parts[2].data() + parts[2].size()) {
    throw UsageError("grid n: '" + parts[2] + "' is not an integer");
  }
  if (n < 1) throw UsageError("grid is empty (n = " + parts[2] + ")");
  return linspace(lo, hi, n);
}

std::vector<double> parse_thetas(const std::string& text) {
  std::vector<double> out;
  for (const std::string& p : split(text, ',')) out.push_back(parse_double(p, "theta"));
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"All-resonance gates on microwave-photon resonators coupled to a qutrit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kSoftwareVersion);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "simulate one gate");
  simulate->add_option("gate", sim.gate, "cphase, cphase10, ccphase or swap")->required();
  simulate->add_option("--theta", sim.theta, "initial-state angles v1,v2[,v3] (radians); default: angle average");
  simulate->add_flag("--unitary-limit", sim.unitary_limit, "no decoherence, only the addressed coupling");
  simulate->add_flag("--direct", sim.direct, "average by direct quadrature instead of the channel");
  simulate->add_flag("--density", sim.density, "write resonator density matrices");
  simulate->add_flag("--density-full", sim.density_full, "also write full-space density matrices");
  simulate->add_flag("--trajectory", sim.trajectory, "write populations at step boundaries (with --theta)");
  simulate->add_option("--sample-every", sim.sample_every, "extra trajectory samples every N RK4 steps");
  sim.common.attach(simulate);

  SweepArgs sw;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "vary one parameter, channel-averaged fidelity per value");
  sweep_cmd->add_option("parameter", sw.parameter, "kappa (1/ns), gamma (1/ns), anharmonicity (MHz), gmin (MHz)")
      ->required();
  sweep_cmd->add_option("--grid", sw.grid, "lo:hi:n")->required();
  sweep_cmd->add_option("--gate", sw.gate, "gate kind");
  sw.common.attach(sweep_cmd);

  VerifyArgs ver;
  CLI::App* verify = app.add_subcommand("verify", "run the built-in oracle checks");
  verify->add_flag("--quick", ver.quick, "skip the cc-phase channel and quadrature runs");
  verify->add_option("--inject-fault", ver.fault, "corrupt the schedules: step2-area");
  verify->add_option("--jobs", ver.jobs, "worker threads");
  verify->add_option("--dt", ver.dt, "RK4 step in ns");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kSoftwareVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sw, out);
    return cmd_verify(ver, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvariantError& e) {
    err << "invariant violated: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
}

}  // namespace allres
