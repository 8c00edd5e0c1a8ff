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

#include "allres/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

namespace allres {

namespace {

constexpr Complex kI(0.0, 1.0);

CMatrix embed_block(const CMatrix& block, const SpaceLayout& layout) {
  const std::vector<int> idx = computational_indices(layout);
  CMatrix full = CMatrix::Zero(layout.total_dim(), layout.total_dim());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      full(idx[j], idx[k]) = block(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
    }
  }
  return full;
}

CMatrix extract_block(const CMatrix& full, const std::vector<int>& idx) {
  const auto d = static_cast<Eigen::Index>(idx.size());
  CMatrix block(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index j = 0; j < d; ++j) block(j, k) = full(idx[static_cast<std::size_t>(j)], idx[static_cast<std::size_t>(k)]);
  }
  return block;
}

struct Propagated {
  std::vector<ScheduleResult> results;
  std::vector<StepEnvelope> steps;
  double total_duration = 0.0;
};

// Propagates every input through the gate schedule, checks physicality of each
// run and folds the boundary diagnostics into per-step envelopes.
Propagated propagate_all(GateKind kind, const GateParams& params, std::span<const DensityMatrix> inputs,
                         const ExecutionConfig& exec) {
  exec.validate();
  const Schedule schedule = build_schedule(kind, params);
  exec.integrator.validate_for(schedule);
  const SystemSpec system = params.system(kind);
  IntegratorConfig cfg = exec.integrator;
  cfg.record_states = false;

  Propagated out;
  out.total_duration = schedule.total_duration();
  out.results.resize(inputs.size());
  const std::size_t groups = std::min<std::size_t>(static_cast<std::size_t>(exec.jobs), std::max<std::size_t>(inputs.size(), 1));
  const std::size_t per_group = (inputs.size() + groups - 1) / std::max<std::size_t>(groups, 1);
  parallel_for(groups, exec.jobs, [&](std::size_t g) {
    const std::size_t first = g * per_group;
    if (first >= inputs.size()) return;
    const std::size_t count = std::min(per_group, inputs.size() - first);
    auto part = propagate_batch(inputs.subspan(first, count), system, schedule, cfg);
    for (std::size_t k = 0; k < count; ++k) out.results[first + k] = std::move(part[k]);
  });

  const bool unitary = !params.has_decoherence(kind);
  out.steps.resize(schedule.steps.size());
  for (std::size_t s = 0; s < schedule.steps.size(); ++s) {
    out.steps[s].label = schedule.steps[s].label;
    out.steps[s].min_eigenvalue = 1.0;
  }
  for (std::size_t i = 0; i < out.results.size(); ++i) {
    const Trajectory& traj = out.results[i].trajectory;
    enforce_physicality(traj, unitary);
    const double exc0 = expectation(inputs[i], excitation_number(inputs[i].layout)).real();
    for (std::size_t s = 0; s < traj.steps.size(); ++s) {
      const StepDiagnostics& d = traj.steps[s];
      StepEnvelope& e = out.steps[s];
      e.t_start = d.t_start;
      e.t_end = d.t_end;
      e.substeps = d.substeps;
      e.max_trace_error = std::max(e.max_trace_error, d.trace_error);
      e.max_hermiticity_drift = std::max(e.max_hermiticity_drift, d.hermiticity_drift);
      e.min_eigenvalue = std::min(e.min_eigenvalue, d.min_eigenvalue);
      e.max_excitation_drift = std::max(e.max_excitation_drift, std::abs(d.excitation_number - exc0));
    }
  }
  return out;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (nodes_per_angle < 5) {
    throw ConfigError("quadrature needs >= 5 nodes per angle (got " + std::to_string(nodes_per_angle) + ")");
  }
}

std::vector<double> QuadratureSpec::nodes() const {
  validate();
  std::vector<double> out(static_cast<std::size_t>(nodes_per_angle));
  for (int i = 0; i < nodes_per_angle; ++i) out[static_cast<std::size_t>(i)] = kTwoPi * i / nodes_per_angle;
  return out;
}

std::vector<std::vector<double>> quadrature_grid(int num_angles, const QuadratureSpec& quad) {
  if (num_angles < 1) throw UsageError("quadrature_grid: need at least one angle");
  const std::vector<double> nodes = quad.nodes();
  const std::size_t m = nodes.size();
  std::size_t total = 1;
  for (int a = 0; a < num_angles; ++a) total *= m;
  std::vector<std::vector<double>> grid(total, std::vector<double>(static_cast<std::size_t>(num_angles)));
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t rest = p;
    for (int a = num_angles - 1; a >= 0; --a) {
      grid[p][static_cast<std::size_t>(a)] = nodes[rest % m];
      rest /= m;
    }
  }
  return grid;
}

void ExecutionConfig::validate() const {
  integrator.validate();
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  const std::size_t per = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w * per; i < std::min(count, (w + 1) * per); ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

AveragedFidelity average_fidelity_direct(GateKind kind, const GateParams& params, const QuadratureSpec& quad,
                                         const ExecutionConfig& exec) {
  const int n = num_resonators(kind);
  const auto grid = quadrature_grid(n, quad);
  const SpaceLayout layout = params.system(kind).layout();
  std::vector<DensityMatrix> inputs;
  inputs.reserve(grid.size());
  for (const auto& thetas : grid) inputs.push_back(to_density(initial_state(thetas, layout)));

  Propagated prop = propagate_all(kind, params, inputs, exec);

  const std::vector<int> idx = computational_indices(layout);
  const CMatrix u = ideal_unitary(kind);
  AveragedFidelity out;
  out.kind = kind;
  out.total_duration = prop.total_duration;
  out.propagations = static_cast<int>(grid.size());
  out.steps = std::move(prop.steps);
  out.min_fidelity = 1.0;
  out.max_fidelity = 0.0;
  double sum = 0.0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const CVector target = u * product_amplitudes(grid[p]).cast<Complex>();
    const CMatrix block = extract_block(prop.results[p].state.matrix, idx);
    const double f = target.dot(block * target).real();
    sum += f;
    out.min_fidelity = std::min(out.min_fidelity, f);
    out.max_fidelity = std::max(out.max_fidelity, f);
  }
  out.fidelity = sum / static_cast<double>(grid.size());
  return out;
}

ProcessMatrix reconstruct_channel(GateKind kind, const GateParams& params, const ExecutionConfig& exec) {
  const SpaceLayout layout = params.system(kind).layout();
  const int d = 1 << num_resonators(kind);
  const std::vector<int> idx = computational_indices(layout);

  // Inputs: |j><j| for every j, then |+><+| and |+i><+i| for every j < k,
  // with |+> = (|j> + |k>)/sqrt2 and |+i> = (|j> + i|k>)/sqrt2.
  std::vector<DensityMatrix> inputs;
  auto add = [&](const CVector& v) {
    const CMatrix block = v * v.adjoint();
    inputs.push_back(DensityMatrix{layout, embed_block(block, layout)});
  };
  for (int j = 0; j < d; ++j) add(CVector::Unit(d, j));
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      add(s * (CVector::Unit(d, j) + CVector::Unit(d, k)));
      add(s * (CVector::Unit(d, j) + kI * CVector::Unit(d, k)));
    }
  }

  Propagated prop = propagate_all(kind, params, inputs, exec);
  std::vector<CMatrix> blocks;
  std::vector<Complex> traces;
  for (const ScheduleResult& r : prop.results) {
    blocks.push_back(extract_block(r.state.matrix, idx));
    traces.push_back(r.state.matrix.trace());
  }

  ProcessMatrix ch;
  ch.kind = kind;
  ch.dim = d;
  ch.total_duration = prop.total_duration;
  ch.propagations = static_cast<int>(inputs.size());
  ch.steps = std::move(prop.steps);
  ch.images.assign(static_cast<std::size_t>(d * d), CMatrix());
  ch.leakage = CMatrix::Zero(d, d);
  auto set = [&](int j, int k, CMatrix image, Complex trace) {
    ch.leakage(j, k) = trace - image.trace();
    ch.images[static_cast<std::size_t>(j * d + k)] = std::move(image);
  };
  for (int j = 0; j < d; ++j) set(j, j, blocks[static_cast<std::size_t>(j)], traces[static_cast<std::size_t>(j)]);
  std::size_t next = static_cast<std::size_t>(d);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      const CMatrix& plus = blocks[next];
      const CMatrix& plus_i = blocks[next + 1];
      const CMatrix diag = ch.image(j, j) + ch.image(k, k);
      const Complex diag_trace = traces[static_cast<std::size_t>(j)] + traces[static_cast<std::size_t>(k)];
      // |j><k| = |+><+| + i|+i><+i| - (1+i)/2 (|j><j| + |k><k|), and its adjoint for |k><j|.
      const Complex a(0.5, 0.5);
      set(j, k, plus + kI * plus_i - a * diag, traces[next] + kI * traces[next + 1] - a * diag_trace);
      set(k, j, plus - kI * plus_i - std::conj(a) * diag,
          traces[next] - kI * traces[next + 1] - std::conj(a) * diag_trace);
      next += 2;
    }
  }
  return ch;
}

ProcessMatrix unitary_channel(GateKind kind, const CMatrix& u) {
  const int d = 1 << num_resonators(kind);
  if (u.rows() != d || u.cols() != d) throw UsageError("unitary_channel: matrix size does not match the gate");
  ProcessMatrix ch;
  ch.kind = kind;
  ch.dim = d;
  ch.leakage = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) ch.images.push_back(u.col(j) * u.col(k).adjoint());
  }
  return ch;
}

CMatrix apply_channel(const ProcessMatrix& channel, const CMatrix& rho_block) {
  if (rho_block.rows() != channel.dim || rho_block.cols() != channel.dim) {
    throw UsageError("apply_channel: operator size does not match the channel");
  }
  CMatrix out = CMatrix::Zero(channel.dim, channel.dim);
  for (int j = 0; j < channel.dim; ++j) {
    for (int k = 0; k < channel.dim; ++k) out += rho_block(j, k) * channel.image(j, k);
  }
  return out;
}

double average_fidelity_channel(const ProcessMatrix& channel, GateKind kind, const QuadratureSpec& quad) {
  if (channel.kind != kind) {
    throw UsageError("channel was reconstructed for " + std::string(to_string(channel.kind)) + ", not " +
                     std::string(to_string(kind)));
  }
  const int d = channel.dim;
  const CMatrix u = ideal_unitary(kind);
  const auto grid = quadrature_grid(num_resonators(kind), quad);
  double sum = 0.0;
  for (const auto& thetas : grid) {
    const RVector c = product_amplitudes(thetas);
    const CVector target = u * c.cast<Complex>();
    double f = 0.0;
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        const double w = c(j) * c(k);
        if (w == 0.0) continue;
        f += w * target.dot(channel.image(j, k) * target).real();
      }
    }
    sum += f;
  }
  return sum / static_cast<double>(grid.size());
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::Kappa: return "kappa";
    case SweepParameter::Gamma: return "gamma";
    case SweepParameter::Anharmonicity: return "anharmonicity";
    case SweepParameter::GMin: return "gmin";
  }
  return "?";
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  for (SweepParameter p : {SweepParameter::Kappa, SweepParameter::Gamma, SweepParameter::Anharmonicity,
                           SweepParameter::GMin}) {
    if (to_string(p) == name) return p;
  }
  throw UsageError("unknown sweep parameter '" + std::string(name) + "' (expected kappa, gamma, anharmonicity or gmin)");
}

std::string_view sweep_unit(SweepParameter p) {
  return p == SweepParameter::Kappa || p == SweepParameter::Gamma ? "1/ns" : "MHz";
}

GateParams apply_sweep_value(const GateParams& baseline, SweepParameter p, double value) {
  if (!std::isfinite(value)) throw ConfigError("sweep value must be finite");
  GateParams out = baseline;
  switch (p) {
    case SweepParameter::Kappa:
      if (value < 0.0) throw ConfigError("kappa must be >= 0");
      out.kappa.fill(value);
      break;
    case SweepParameter::Gamma: {
      if (value < 0.0) throw ConfigError("gamma must be >= 0");
      if (baseline.qutrit.gamma_ge <= 0.0) throw ConfigError("gamma sweep needs a nonzero baseline gamma_ge");
      const double factor = value / baseline.qutrit.gamma_ge;
      out.qutrit.gamma_ge = value;
      out.qutrit.gamma_ef *= factor;
      out.qutrit.gamma_phi_e *= factor;
      out.qutrit.gamma_phi_f *= factor;
      break;
    }
    case SweepParameter::Anharmonicity: out.qutrit.anharmonicity = mhz(value); break;
    case SweepParameter::GMin: out.g_min = mhz(value); break;
  }
  out.validate();
  return out;
}

void SweepSpec::validate() const {
  if (values.empty()) throw UsageError("sweep grid is empty");
  for (double v : values) apply_sweep_value(baseline, parameter, v);
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw UsageError("grid needs at least one point");
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw UsageError("grid bounds must be finite");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

bool SweepResult::non_increasing() const {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].fidelity > points[i - 1].fidelity) return false;
  }
  return true;
}

bool SweepResult::strictly_increasing() const {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].fidelity > points[i - 1].fidelity)) return false;
  }
  return true;
}

bool SweepResult::strictly_decreasing() const {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].fidelity < points[i - 1].fidelity)) return false;
  }
  return true;
}

SweepResult sweep(GateKind kind, const SweepSpec& spec, const QuadratureSpec& quad, const ExecutionConfig& exec) {
  spec.validate();
  quad.validate();
  SweepResult out;
  out.parameter = spec.parameter;
  out.kind = kind;
  for (double v : spec.values) {
    const GateParams params = apply_sweep_value(spec.baseline, spec.parameter, v);
    const ProcessMatrix ch = reconstruct_channel(kind, params, exec);
    out.points.push_back(SweepPoint{v, average_fidelity_channel(ch, kind, quad)});
  }
  return out;
}

CMatrix resonator_block(const DensityMatrix& rho) {
  const SpaceLayout& layout = rho.layout;
  if (!layout.is_qutrit_layout()) throw UsageError("resonator_block: layout has no qutrit factor");
  const int n = layout.num_resonators();
  std::vector<int> keep(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) keep[static_cast<std::size_t>(r)] = r + 1;
  const DensityMatrix reduced = partial_trace(rho, keep);
  std::vector<int> idx(std::size_t{1} << n);
  for (std::size_t s = 0; s < idx.size(); ++s) {
    int flat = 0;
    for (int r = 0; r < n; ++r) flat += static_cast<int>((s >> (n - 1 - r)) & 1U) * reduced.layout.stride(r);
    idx[s] = flat;
  }
  return extract_block(reduced.matrix, idx);
}

DensityReport density_report(GateKind kind, const GateParams& params, std::span<const double> thetas,
                             const IntegratorConfig& cfg, bool full_space) {
  const GateReport run = run_gate(kind, params, thetas, cfg);
  DensityReport out;
  out.kind = kind;
  out.thetas.assign(thetas.begin(), thetas.end());
  out.fidelity = run.fidelity;
  out.total_duration = run.total_duration;
  out.initial_block = resonator_block(run.initial_state);
  out.final_block = resonator_block(run.final_state);
  if (full_space) {
    out.initial_full = run.initial_state;
    out.final_full = run.final_state;
  }
  return out;
}

}  // namespace allres
