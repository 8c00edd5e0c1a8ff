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

#include "allres/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace allres {

namespace {

constexpr Complex kI(0.0, 1.0);

// Collects the (row, col, value) entries of `m` whose indices both survive `pos`.
// Throws if an entry leaves the kept set from inside it.
template <typename Entry>
std::vector<Entry> restricted_entries(const CMatrix& m, const std::vector<int>& pos, bool both_directions) {
  std::vector<Entry> out;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const Complex v = m(r, c);
      if (v == Complex(0.0)) continue;
      const int pr = pos[static_cast<std::size_t>(r)];
      const int pc = pos[static_cast<std::size_t>(c)];
      if (pr >= 0 && pc >= 0) {
        out.push_back(Entry{pr, pc, v});
      } else if (pc >= 0 || (both_directions && pr >= 0)) {
        throw std::logic_error("StepGenerator: kept index set is not closed under the dynamics");
      }
    }
  }
  return out;
}

CMatrix expand(const CMatrix& reduced, const std::vector<int>& kept, int full_dim) {
  CMatrix full = CMatrix::Zero(full_dim, full_dim);
  const auto n = static_cast<Eigen::Index>(kept.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      full(kept[static_cast<std::size_t>(i)], kept[static_cast<std::size_t>(j)]) = reduced(i, j);
    }
  }
  return full;
}

CMatrix restrict_to(const CMatrix& full, const std::vector<int>& kept) {
  const auto n = static_cast<Eigen::Index>(kept.size());
  CMatrix red(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      red(i, j) = full(kept[static_cast<std::size_t>(i)], kept[static_cast<std::size_t>(j)]);
    }
  }
  return red;
}

std::vector<int> all_indices(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

void check_layout(const DensityMatrix& rho, const SystemSpec& system) {
  if (!(rho.layout == system.layout())) throw UsageError("initial state layout does not match the system");
  if (rho.matrix.rows() != rho.layout.total_dim() || rho.matrix.cols() != rho.layout.total_dim()) {
    throw UsageError("density matrix dimensions do not match its layout");
  }
  if (hermiticity_error(rho.matrix) > 1e-12 * std::max(1.0, rho.matrix.cwiseAbs().maxCoeff())) {
    throw UsageError("initial state must be Hermitian");
  }
}

CMatrix unpack(const CMatrix& batch, Eigen::Index k, Eigen::Index n) {
  return batch.row(k).transpose().reshaped(n, n);
}

DensityMatrix unpack_full(const CMatrix& batch, Eigen::Index k, const std::vector<int>& kept, const SpaceLayout& layout) {
  return DensityMatrix{layout, expand(unpack(batch, k, static_cast<Eigen::Index>(kept.size())), kept, layout.total_dim())};
}

// One pulse step of fixed-step RK4 on the reduced index set for every row of
// `batch`. `t0` is the schedule time at the start of the step (for trajectory
// bookkeeping only). Returns one diagnostics record per row.
std::vector<StepDiagnostics> integrate_step(StepGenerator& gen, CMatrix& batch, const PulseStep& step, double t0,
                                            const IntegratorConfig& cfg, const SpaceLayout& layout,
                                            const RVector& excitation, std::span<Trajectory> trajectories) {
  const int n = gen.dim();
  const Eigen::Index m = batch.rows();
  int substeps = 0;
  if (step.duration > 0.0) {
    substeps = static_cast<int>(std::ceil(step.duration / cfg.dt - 1e-9));
    substeps = std::max(substeps, 1);
  }

  CMatrix k1, k2, k3, k4, tmp;
  for (int s = 0; s < substeps; ++s) {
    const double t = s * cfg.dt;
    const double h = (s + 1 == substeps) ? step.duration - t : cfg.dt;
    gen.apply(t, batch, k1);
    tmp = batch + (0.5 * h) * k1;
    gen.apply(t + 0.5 * h, tmp, k2);
    tmp = batch + (0.5 * h) * k2;
    gen.apply(t + 0.5 * h, tmp, k3);
    tmp = batch + h * k3;
    gen.apply(t + h, tmp, k4);
    batch += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!trajectories.empty() && cfg.record_states && cfg.sample_every > 0 && (s + 1) % cfg.sample_every == 0 && s + 1 != substeps) {
      for (Eigen::Index k = 0; k < m; ++k) {
        trajectories[static_cast<std::size_t>(k)].times.push_back(t0 + t + h);
        trajectories[static_cast<std::size_t>(k)].states.push_back(unpack_full(batch, k, gen.kept_indices(), layout));
      }
    }
  }

  std::vector<StepDiagnostics> out(static_cast<std::size_t>(m));
  for (Eigen::Index k = 0; k < m; ++k) {
    StepDiagnostics& diag = out[static_cast<std::size_t>(k)];
    diag.label = step.label;
    diag.t_start = t0;
    diag.t_end = t0 + step.duration;
    diag.substeps = substeps;
    CMatrix rho = unpack(batch, k, n);
    diag.hermiticity_drift = hermiticity_error(rho);
    if (cfg.rehermitize) {
      rho = (0.5 * (rho + rho.adjoint())).eval();
      batch.row(k) = rho.reshaped().transpose();
    }
    if (cfg.diagnostics) {
      diag.trace_error = std::abs(rho.trace() - Complex(1.0));
      const CMatrix herm = 0.5 * (rho + rho.adjoint());
      Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
      diag.min_eigenvalue = n > 0 ? solver.eigenvalues().minCoeff() : 0.0;
      if (n < layout.total_dim()) diag.min_eigenvalue = std::min(diag.min_eigenvalue, 0.0);
      double exc = 0.0;
      for (int i = 0; i < n; ++i) exc += excitation(gen.kept_indices()[static_cast<std::size_t>(i)]) * rho(i, i).real();
      diag.excitation_number = exc;
    }
  }
  return out;
}

RVector excitation_diagonal(const SpaceLayout& layout) {
  return excitation_number(layout).matrix.diagonal().real();
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!std::isfinite(dt) || dt <= 0.0) throw ConfigError("integrator dt must be > 0");
  if (sample_every < 0) throw ConfigError("sample_every must be >= 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
}

void IntegratorConfig::validate_for(const Schedule& schedule) const {
  validate();
  const double wmax = schedule.max_abs_detuning();
  if (wmax > 0.0) {
    const double bound = (kTwoPi / wmax) / 100.0;
    if (dt > bound * (1.0 + 1e-12)) {
      throw ConfigError("integrator dt = " + std::to_string(dt) + " ns exceeds " + std::to_string(bound) +
                        " ns (100 samples per fastest detuning period)");
    }
  }
}

CMatrix lindblad_rhs(const DensityMatrix& rho, const Operator& hamiltonian, std::span<const Operator> collapse) {
  if (!(rho.layout == hamiltonian.layout)) throw UsageError("lindblad_rhs: Hamiltonian layout mismatch");
  CMatrix out = -kI * (hamiltonian.matrix * rho.matrix - rho.matrix * hamiltonian.matrix);
  for (const Operator& l : collapse) {
    if (!(l.layout == rho.layout)) throw UsageError("lindblad_rhs: collapse operator layout mismatch");
    const CMatrix ldl = l.matrix.adjoint() * l.matrix;
    out += l.matrix * rho.matrix * l.matrix.adjoint() - 0.5 * (ldl * rho.matrix + rho.matrix * ldl);
  }
  return out;
}

StepGenerator::StepGenerator(const SystemSpec& system, const PulseStep& step, const PhaseAccumulators& phases_at_start,
                             std::vector<int> kept_indices)
    : kept_(std::move(kept_indices)) {
  const SpaceLayout layout = system.layout();
  const int full = layout.total_dim();
  const int n = static_cast<int>(kept_.size());
  std::vector<int> pos(static_cast<std::size_t>(full), -1);
  for (int i = 0; i < n; ++i) {
    const int k = kept_[static_cast<std::size_t>(i)];
    if (k < 0 || k >= full || pos[static_cast<std::size_t>(k)] >= 0) {
      throw UsageError("StepGenerator: invalid kept index list");
    }
    pos[static_cast<std::size_t>(k)] = i;
  }

  const std::vector<Operator> collapse = collapse_operators(system, layout);
  CMatrix decay = CMatrix::Zero(full, full);
  for (const Operator& l : collapse) {
    decay += l.matrix.adjoint() * l.matrix;
    collapse_.push_back(restricted_entries<Entry>(l.matrix, pos, false));
  }
  if (!decay.isDiagonal(0.0)) throw std::logic_error("StepGenerator: sum L^dagger L must be diagonal");
  half_decay_.resize(n);
  for (int i = 0; i < n; ++i) half_decay_(i) = 0.5 * decay(kept_[static_cast<std::size_t>(i)], kept_[static_cast<std::size_t>(i)]).real();

  for (const CouplingTerm& term : coupling_terms(layout, step)) {
    Term t;
    t.g = term.g;
    t.phase0 = phases_at_start.phase(term.resonator, term.transition);
    t.detuning = term.detuning;
    t.entries = restricted_entries<Entry>(term.op.matrix, pos, true);
    terms_.push_back(std::move(t));
  }
  scratch_.resize(n, n);
}

namespace {

// dst[i] (+)= a * src[i] with the plain real-arithmetic complex product.
template <bool Accumulate>
inline void axpy(Complex a, const Complex* src, Complex* dst, Eigen::Index len) {
  const double ar = a.real();
  const double ai = a.imag();
  const auto* s = reinterpret_cast<const double*>(src);
  auto* d = reinterpret_cast<double*>(dst);
  for (Eigen::Index i = 0; i < 2 * len; i += 2) {
    const double re = ar * s[i] - ai * s[i + 1];
    const double im = ar * s[i + 1] + ai * s[i];
    if constexpr (Accumulate) {
      d[i] += re;
      d[i + 1] += im;
    } else {
      d[i] = re;
      d[i + 1] = im;
    }
  }
}

}  // namespace

void StepGenerator::apply(double t, const CMatrix& batch, CMatrix& out) {
  // G = -iH - K/2. Y = rho G^dagger, built column by column: Y.col(r) += conj(G(r, c)) rho.col(c).
  // For Hermitian rho, G rho + rho G^dagger = Y^dagger + Y.
  const Eigen::Index n = dim();
  const Eigen::Index m = batch.rows();
  const Eigen::Index len = n * m;  // one column of every rho in the batch
  scratch_.resize(m, n * n);
  out.resize(m, n * n);
  const Complex* rho = batch.data();
  Complex* y = scratch_.data();
  Complex* o = out.data();

  for (Eigen::Index c = 0; c < n; ++c) axpy<false>(-half_decay_(c), rho + c * len, y + c * len, len);
  for (const Term& term : terms_) {
    const Complex phase = std::polar(1.0, term.phase0 + term.detuning * t);
    // H = g (e^{i phi} A + e^{-i phi} A^dagger); conj(-i H(r, c)) = i conj(H(r, c))
    const Complex fwd = kI * term.g * std::conj(phase);
    const Complex bwd = kI * term.g * phase;
    for (const Entry& e : term.entries) {
      axpy<true>(fwd * std::conj(e.value), rho + e.col * len, y + e.row * len, len);
      axpy<true>(bwd * e.value, rho + e.row * len, y + e.col * len, len);
    }
  }

  const auto* yd = reinterpret_cast<const double*>(y);
  auto* od = reinterpret_cast<double*>(o);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const Eigen::Index rc = 2 * (c * n + r) * m;
      const Eigen::Index cr = 2 * (r * n + c) * m;
      for (Eigen::Index k = 0; k < 2 * m; k += 2) {
        od[rc + k] = yd[rc + k] + yd[cr + k];
        od[rc + k + 1] = yd[rc + k + 1] - yd[cr + k + 1];
      }
    }
  }
  for (const auto& entries : collapse_) {
    for (const Entry& a : entries) {
      for (const Entry& b : entries) {
        axpy<true>(a.value * std::conj(b.value), rho + (b.col * n + a.col) * m, o + (b.row * n + a.row) * m, m);
      }
    }
  }
}

std::vector<int> reachable_indices(const CMatrix& rho, const SystemSpec& system, std::span<const PulseStep> steps) {
  const SpaceLayout layout = system.layout();
  const int full = layout.total_dim();
  std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(full));
  auto add_edges = [&](const CMatrix& m, bool both) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (m(r, c) == Complex(0.0) || r == c) continue;
        adjacency[static_cast<std::size_t>(c)].push_back(static_cast<int>(r));
        if (both) adjacency[static_cast<std::size_t>(r)].push_back(static_cast<int>(c));
      }
    }
  };
  for (const PulseStep& step : steps) {
    for (const CouplingTerm& term : coupling_terms(layout, step)) add_edges(term.op.matrix, true);
  }
  for (const Operator& l : collapse_operators(system, layout)) add_edges(l.matrix, false);

  std::vector<bool> seen(static_cast<std::size_t>(full), false);
  std::deque<int> queue;
  for (int i = 0; i < full; ++i) {
    if (rho.row(i).cwiseAbs().maxCoeff() > 0.0 || rho.col(i).cwiseAbs().maxCoeff() > 0.0) {
      seen[static_cast<std::size_t>(i)] = true;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const int i = queue.front();
    queue.pop_front();
    for (int j : adjacency[static_cast<std::size_t>(i)]) {
      if (!seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        queue.push_back(j);
      }
    }
  }
  std::vector<int> kept;
  for (int i = 0; i < full; ++i) {
    if (seen[static_cast<std::size_t>(i)]) kept.push_back(i);
  }
  return kept;
}

StepResult propagate_step(const DensityMatrix& rho0, const SystemSpec& system, const PulseStep& step,
                          const PhaseAccumulators& phases, const IntegratorConfig& cfg) {
  cfg.validate();
  check_layout(rho0, system);
  validate_step(system, step);
  const SpaceLayout& layout = rho0.layout;
  std::vector<int> kept = cfg.restrict_to_reachable
                              ? reachable_indices(rho0.matrix, system, std::span<const PulseStep>(&step, 1))
                              : all_indices(layout.total_dim());
  StepGenerator gen(system, step, phases, kept);
  CMatrix batch = restrict_to(rho0.matrix, kept).reshaped().transpose();
  StepResult result;
  result.diagnostics = integrate_step(gen, batch, step, 0.0, cfg, layout, excitation_diagonal(layout), {}).front();
  result.state = unpack_full(batch, 0, kept, layout);
  result.phases = advance_phases(phases, step, step.duration);
  return result;
}

ScheduleResult propagate_schedule(const DensityMatrix& rho0, const SystemSpec& system, const Schedule& schedule,
                                  const IntegratorConfig& cfg) {
  return std::move(propagate_batch(std::span<const DensityMatrix>(&rho0, 1), system, schedule, cfg).front());
}

std::vector<ScheduleResult> propagate_batch(std::span<const DensityMatrix> rho0, const SystemSpec& system,
                                            const Schedule& schedule, const IntegratorConfig& cfg) {
  cfg.validate();
  for (const DensityMatrix& r : rho0) check_layout(r, system);
  for (const PulseStep& step : schedule.steps) validate_step(system, step);
  const SpaceLayout layout = system.layout();
  std::vector<int> kept;
  if (cfg.restrict_to_reachable) {
    CMatrix support = CMatrix::Zero(layout.total_dim(), layout.total_dim());
    for (const DensityMatrix& r : rho0) support += r.matrix.cwiseAbs().cast<Complex>();
    kept = reachable_indices(support, system, schedule.steps);
  } else {
    kept = all_indices(layout.total_dim());
  }
  const auto n = static_cast<Eigen::Index>(kept.size());
  const RVector excitation = excitation_diagonal(layout);

  std::vector<ScheduleResult> results(rho0.size());
  const std::size_t chunk = static_cast<std::size_t>(cfg.batch_size);
  for (std::size_t first = 0; first < rho0.size(); first += chunk) {
    const std::size_t count = std::min(chunk, rho0.size() - first);
    CMatrix batch(static_cast<Eigen::Index>(count), n * n);
    std::vector<Trajectory> trajectories(count);
    for (std::size_t k = 0; k < count; ++k) {
      batch.row(static_cast<Eigen::Index>(k)) = restrict_to(rho0[first + k].matrix, kept).reshaped().transpose();
      trajectories[k].times.push_back(0.0);
      trajectories[k].states.push_back(rho0[first + k]);
    }
    PhaseAccumulators phases(system.num_resonators());
    double t = 0.0;
    for (const PulseStep& step : schedule.steps) {
      if (schedule.phase_convention == PhaseConvention::Literal) phases = literal_phases(step, t);
      StepGenerator gen(system, step, phases, kept);
      auto diags = integrate_step(gen, batch, step, t, cfg, layout, excitation, trajectories);
      t += step.duration;
      phases = advance_phases(phases, step, step.duration);
      const bool last = &step == &schedule.steps.back();
      for (std::size_t k = 0; k < count; ++k) {
        trajectories[k].steps.push_back(std::move(diags[k]));
        if (cfg.record_states || last) {
          trajectories[k].times.push_back(t);
          trajectories[k].states.push_back(unpack_full(batch, static_cast<Eigen::Index>(k), kept, layout));
        }
      }
    }
    for (std::size_t k = 0; k < count; ++k) {
      results[first + k].state = trajectories[k].states.back();
      results[first + k].trajectory = std::move(trajectories[k]);
    }
  }
  return results;
}

Operator resonant_propagator(double g, double t, Transition transition, const SpaceLayout& layout, int resonator) {
  if (!layout.is_qutrit_layout()) throw UsageError("resonant_propagator: layout has no qutrit factor");
  const int factor = resonator + 1;
  if (resonator < 0 || factor >= layout.num_factors()) throw UsageError("resonant_propagator: bad resonator index");
  const int lower = transition == Transition::GE ? 0 : 1;
  const int upper = lower + 1;
  const int cutoff = layout.dim(factor);
  const int q_stride = layout.stride(0);
  const int r_stride = layout.stride(factor);

  CMatrix u = CMatrix::Identity(layout.total_dim(), layout.total_dim());
  for (int i = 0; i < layout.total_dim(); ++i) {
    if (layout.digit(i, 0) != upper) continue;
    const int n = layout.digit(i, factor);
    if (n + 1 >= cutoff) continue;
    // |n, upper> <-> |n+1, lower>, H block = g sqrt(n+1) sigma_x
    const int j = i + (lower - upper) * q_stride + r_stride;
    const double angle = g * t * std::sqrt(static_cast<double>(n + 1));
    u(i, i) = std::cos(angle);
    u(j, j) = std::cos(angle);
    u(i, j) = -kI * std::sin(angle);
    u(j, i) = -kI * std::sin(angle);
  }
  return Operator{layout, std::move(u)};
}

}  // namespace allres
