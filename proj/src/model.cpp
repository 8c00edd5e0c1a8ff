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

#include "allres/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace allres {

namespace {

constexpr double kResonanceTol = 1e-12;

bool is_finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

const char* to_string(Transition t) { return t == Transition::GE ? "GE" : "EF"; }

void QutritSpec::validate() const {
  if (!is_finite_nonneg(gamma_ge) || !is_finite_nonneg(gamma_ef) || !is_finite_nonneg(gamma_phi_e) ||
      !is_finite_nonneg(gamma_phi_f)) {
    throw ConfigError("qutrit rates must be finite and >= 0");
  }
  if (!std::isfinite(anharmonicity) || anharmonicity <= 0.0) {
    throw ConfigError("qutrit anharmonicity must be > 0 (transmon)");
  }
}

void ResonatorSpec::validate() const {
  if (!std::isfinite(omega) || omega <= 0.0) throw ConfigError("resonator frequency must be > 0");
  if (!is_finite_nonneg(kappa)) throw ConfigError("resonator decay rate must be finite and >= 0");
  if (fock_cutoff < 2) throw ConfigError("resonator fock_cutoff must be >= 2");
}

SpaceLayout SystemSpec::layout() const {
  std::vector<int> dims{3};
  for (const auto& r : resonators) dims.push_back(r.fock_cutoff);
  return SpaceLayout(std::move(dims));
}

void SystemSpec::validate() const {
  qutrit.validate();
  if (resonators.empty()) throw ConfigError("at least one resonator required");
  for (const auto& r : resonators) r.validate();
}

double PulseStep::addressed_coupling() const {
  const auto r = static_cast<std::size_t>(addressed.resonator);
  return addressed.transition == Transition::GE ? g_ge.at(r) : g_ef.at(r);
}

double PulseStep::detuning(int resonator, Transition t) const {
  const auto r = static_cast<std::size_t>(resonator);
  return t == Transition::GE ? detuning_ge.at(r) : detuning_ef.at(r);
}

double PulseStep::max_abs_detuning() const {
  double m = 0.0;
  for (std::size_t r = 0; r < detuning_ge.size(); ++r) {
    if (g_ge[r] != 0.0) m = std::max(m, std::abs(detuning_ge[r]));
    if (g_ef[r] != 0.0) m = std::max(m, std::abs(detuning_ef[r]));
  }
  return m;
}

PulseStep make_pulse_step(const SystemSpec& system, Addressed addressed, double pulse_area,
                          std::vector<double> g_ge, std::vector<double> g_ef, std::string label) {
  system.validate();
  const int n = system.num_resonators();
  if (addressed.resonator < 0 || addressed.resonator >= n) {
    throw ConfigError("addressed resonator index out of range");
  }
  if (static_cast<int>(g_ge.size()) != n || static_cast<int>(g_ef.size()) != n) {
    throw ConfigError("coupling lists must have one entry per resonator");
  }
  for (std::size_t r = 0; r < g_ge.size(); ++r) {
    if (!std::isfinite(g_ge[r]) || !std::isfinite(g_ef[r])) throw ConfigError("couplings must be finite");
  }
  const double delta = system.qutrit.anharmonicity;
  const double omega_r = system.resonators[static_cast<std::size_t>(addressed.resonator)].omega;
  PulseStep step;
  step.label = std::move(label);
  step.omega_ge = addressed.transition == Transition::GE ? omega_r : omega_r + delta;
  if (!(step.omega_ge > 0.0) || !(step.omega_ge - delta > 0.0)) {
    throw ConfigError("resonance unsatisfiable: qutrit transition frequencies would be non-positive");
  }
  step.g_ge = std::move(g_ge);
  step.g_ef = std::move(g_ef);
  step.addressed = addressed;
  step.pulse_area = pulse_area;
  const double g = step.addressed_coupling();
  if (g == 0.0) throw ConfigError("resonance unsatisfiable: addressed coupling is zero");
  step.duration = pulse_area / g;
  if (step.duration < 0.0) throw ConfigError("pulse area and addressed coupling must have the same sign");

  const double omega_ef = step.omega_ge - delta;
  step.detuning_ge.resize(static_cast<std::size_t>(n));
  step.detuning_ef.resize(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    const double w = system.resonators[static_cast<std::size_t>(r)].omega;
    step.detuning_ge[static_cast<std::size_t>(r)] = step.omega_ge - w;
    step.detuning_ef[static_cast<std::size_t>(r)] = omega_ef - w;
  }
  // The addressed pair is resonant by construction; remove rounding residue.
  if (addressed.transition == Transition::GE) {
    step.detuning_ge[static_cast<std::size_t>(addressed.resonator)] = 0.0;
  } else {
    step.detuning_ef[static_cast<std::size_t>(addressed.resonator)] = 0.0;
  }
  validate_step(system, step);
  return step;
}

void validate_step(const SystemSpec& system, const PulseStep& step) {
  const int n = system.num_resonators();
  if (static_cast<int>(step.g_ge.size()) != n || static_cast<int>(step.g_ef.size()) != n ||
      static_cast<int>(step.detuning_ge.size()) != n || static_cast<int>(step.detuning_ef.size()) != n) {
    throw ConfigError("step '" + step.label + "': per-resonator lists have wrong length");
  }
  const double omega_r = system.resonators.at(static_cast<std::size_t>(step.addressed.resonator)).omega;
  const double omega_t = step.addressed.transition == Transition::GE
                             ? step.omega_ge
                             : step.omega_ge - system.qutrit.anharmonicity;
  if (std::abs(omega_t - omega_r) > kResonanceTol * std::max(1.0, std::abs(omega_r))) {
    throw ConfigError("step '" + step.label + "': addressed resonator is not resonant");
  }
  const double g = step.addressed_coupling();
  if (g == 0.0 || std::abs(step.duration - step.pulse_area / g) > kResonanceTol * std::max(1.0, step.duration)) {
    throw ConfigError("step '" + step.label + "': duration does not equal pulse_area / g");
  }
  if (step.duration < 0.0) throw ConfigError("step '" + step.label + "': negative duration");
}

double Schedule::total_duration() const {
  return std::accumulate(steps.begin(), steps.end(), 0.0,
                         [](double acc, const PulseStep& s) { return acc + s.duration; });
}

double Schedule::max_abs_detuning() const {
  double m = 0.0;
  for (const auto& s : steps) m = std::max(m, s.max_abs_detuning());
  return m;
}

PhaseAccumulators advance_phases(const PhaseAccumulators& phases, const PulseStep& step, double dt) {
  if (dt < 0.0) throw UsageError("advance_phases: dt must be >= 0");
  PhaseAccumulators out = phases;
  for (int r = 0; r < phases.num_resonators(); ++r) {
    for (Transition t : {Transition::GE, Transition::EF}) {
      out.set_phase(r, t, phases.phase(r, t) + step.detuning(r, t) * dt);
    }
  }
  return out;
}

PhaseAccumulators literal_phases(const PulseStep& step, double t_start) {
  return advance_phases(PhaseAccumulators(static_cast<int>(step.g_ge.size())), step, t_start);
}

const char* to_string(PhaseConvention c) { return c == PhaseConvention::Literal ? "literal" : "accumulated"; }

CMatrix annihilation(int dim) {
  CMatrix a = CMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

CMatrix qutrit_raising(Transition t) {
  CMatrix s = CMatrix::Zero(3, 3);
  if (t == Transition::GE) {
    s(1, 0) = 1.0;
  } else {
    s(2, 1) = 1.0;
  }
  return s;
}

CMatrix qutrit_projector(int level) {
  if (level < 0 || level > 2) throw UsageError("qutrit level must be 0, 1 or 2");
  CMatrix p = CMatrix::Zero(3, 3);
  p(level, level) = 1.0;
  return p;
}

Operator resonator_lowering(const SpaceLayout& layout, int resonator) {
  const int factor = resonator + 1;
  if (resonator < 0 || factor >= layout.num_factors()) throw UsageError("resonator index out of range");
  return embed(annihilation(layout.dim(factor)), factor, layout);
}

Operator resonator_number(const SpaceLayout& layout, int resonator) {
  const Operator a = resonator_lowering(layout, resonator);
  return adjoint(a) * a;
}

Operator qutrit_operator(const SpaceLayout& layout, const CMatrix& local) {
  if (!layout.is_qutrit_layout()) throw UsageError("layout has no qutrit factor");
  return embed(local, 0, layout);
}

Operator excitation_number(const SpaceLayout& layout) {
  CMatrix q = CMatrix::Zero(3, 3);
  q(1, 1) = 1.0;
  q(2, 2) = 2.0;
  Operator n = qutrit_operator(layout, q);
  for (int r = 0; r < layout.num_resonators(); ++r) n = n + resonator_number(layout, r);
  return n;
}

std::vector<CouplingTerm> coupling_terms(const SpaceLayout& layout, const PulseStep& step) {
  if (!layout.is_qutrit_layout() || layout.num_resonators() != static_cast<int>(step.g_ge.size())) {
    throw UsageError("coupling_terms: layout does not match step");
  }
  std::vector<CouplingTerm> terms;
  for (int r = 0; r < layout.num_resonators(); ++r) {
    const Operator a = resonator_lowering(layout, r);
    for (Transition t : {Transition::GE, Transition::EF}) {
      const double g = t == Transition::GE ? step.g_ge[static_cast<std::size_t>(r)] : step.g_ef[static_cast<std::size_t>(r)];
      if (g == 0.0) continue;
      terms.push_back(CouplingTerm{r, t, g, step.detuning(r, t), a * qutrit_operator(layout, qutrit_raising(t))});
    }
  }
  return terms;
}

Operator interaction_hamiltonian(const SpaceLayout& layout, const PulseStep& step,
                                 const PhaseAccumulators& phases, double t_within_step) {
  Operator h = zero_operator(layout);
  for (const auto& term : coupling_terms(layout, step)) {
    const double phi = phases.phase(term.resonator, term.transition) + term.detuning * t_within_step;
    const CMatrix x = (term.g * std::polar(1.0, phi)) * term.op.matrix;
    h.matrix += x + x.adjoint();
  }
  return h;
}

std::vector<Operator> collapse_operators(const SystemSpec& system, const SpaceLayout& layout) {
  system.validate();
  if (layout.num_resonators() != system.num_resonators()) {
    throw UsageError("collapse_operators: layout does not match system");
  }
  std::vector<Operator> ops;
  for (int r = 0; r < system.num_resonators(); ++r) {
    const double kappa = system.resonators[static_cast<std::size_t>(r)].kappa;
    if (kappa > 0.0) ops.push_back(Complex(std::sqrt(kappa)) * resonator_lowering(layout, r));
  }
  const QutritSpec& q = system.qutrit;
  if (q.gamma_ge > 0.0) {
    ops.push_back(qutrit_operator(layout, std::sqrt(q.gamma_ge) * qutrit_raising(Transition::GE).adjoint()));
  }
  if (q.gamma_ef > 0.0) {
    ops.push_back(qutrit_operator(layout, std::sqrt(q.gamma_ef) * qutrit_raising(Transition::EF).adjoint()));
  }
  if (q.gamma_phi_e > 0.0) ops.push_back(qutrit_operator(layout, std::sqrt(q.gamma_phi_e) * qutrit_projector(1)));
  if (q.gamma_phi_f > 0.0) ops.push_back(qutrit_operator(layout, std::sqrt(q.gamma_phi_f) * qutrit_projector(2)));
  return ops;
}

}  // namespace allres
