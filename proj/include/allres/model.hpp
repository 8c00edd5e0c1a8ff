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

// Physical model of N resonators coupled to one transmon qutrit.
//
// Units: every frequency and rate is angular (rad/ns), every time is in ns.
// Qutrit levels are indexed g = 0, e = 1, f = 2.

#ifndef ALLRES_MODEL_HPP
#define ALLRES_MODEL_HPP

#include <string>
#include <vector>

#include "allres/tensor.hpp"

namespace allres {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// GHz (cyclic) to rad/ns.
constexpr double ghz(double f) { return kTwoPi * f; }
/// MHz (cyclic) to rad/ns.
constexpr double mhz(double f) { return kTwoPi * f * 1e-3; }
/// Rate in 1/ns from a lifetime in microseconds.
constexpr double per_us(double lifetime_us) { return 1.0 / (lifetime_us * 1e3); }

enum class Transition { GE, EF };

const char* to_string(Transition t);

struct QutritSpec {
  double gamma_ge = 0.0;     // |e> -> |g> relaxation
  double gamma_ef = 0.0;     // |f> -> |e> relaxation
  double gamma_phi_e = 0.0;  // pure dephasing of |e>
  double gamma_phi_f = 0.0;  // pure dephasing of |f>
  double anharmonicity = ghz(0.8);  // omega_ge - omega_ef

  void validate() const;
};

struct ResonatorSpec {
  double omega = 0.0;
  double kappa = 0.0;
  int fock_cutoff = 3;

  void validate() const;
};

struct SystemSpec {
  QutritSpec qutrit;
  std::vector<ResonatorSpec> resonators;

  int num_resonators() const { return static_cast<int>(resonators.size()); }
  SpaceLayout layout() const;
  void validate() const;
};

struct Addressed {
  int resonator = 0;
  Transition transition = Transition::GE;
};

/// One square resonance pulse. Couplings are listed per resonator; the
/// detunings are derived from the system at construction and cached so the
/// step is self-contained for propagation.
struct PulseStep {
  std::string label;
  double omega_ge = 0.0;
  std::vector<double> g_ge;
  std::vector<double> g_ef;
  Addressed addressed;
  double pulse_area = 0.0;
  double duration = 0.0;
  std::vector<double> detuning_ge;  // omega_ge - omega_r
  std::vector<double> detuning_ef;  // omega_ef - omega_r

  double addressed_coupling() const;
  double detuning(int resonator, Transition t) const;
  double max_abs_detuning() const;
};

/// Builds a step that puts `addressed` exactly on resonance: omega_ge = omega_r
/// (GE) or omega_r + anharmonicity (EF), duration = area / g_addressed.
/// Throws ConfigError when the resonance or the duration cannot be realized.
PulseStep make_pulse_step(const SystemSpec& system, Addressed addressed, double pulse_area,
                          std::vector<double> g_ge, std::vector<double> g_ef, std::string label = {});

/// Checks resonance, duration and shape invariants of a step against `system`.
void validate_step(const SystemSpec& system, const PulseStep& step);

/// How the coupling phases of a step are referenced.
enum class PhaseConvention {
  /// phi = detuning_of_this_step * t, t measured from the start of the schedule.
  /// Resonant pairs carry no phase, so ideal step algebra composes exactly.
  Literal,
  /// phi = integral of the piecewise-constant detuning (continuous frame).
  Accumulated,
};

const char* to_string(PhaseConvention c);

struct Schedule {
  std::vector<PulseStep> steps;
  PhaseConvention phase_convention = PhaseConvention::Literal;

  double total_duration() const;
  double max_abs_detuning() const;
};

/// Running interaction-picture phases phi(t) = integral of the detuning, one per
/// (resonator, transition) pair. Continuous across step boundaries.
class PhaseAccumulators {
 public:
  PhaseAccumulators() = default;
  explicit PhaseAccumulators(int num_resonators) : phases_(2 * static_cast<std::size_t>(num_resonators), 0.0) {}

  int num_resonators() const { return static_cast<int>(phases_.size() / 2); }
  double phase(int resonator, Transition t) const { return phases_.at(slot(resonator, t)); }
  void set_phase(int resonator, Transition t, double value) { phases_.at(slot(resonator, t)) = value; }

  friend bool operator==(const PhaseAccumulators&, const PhaseAccumulators&) = default;

 private:
  static std::size_t slot(int resonator, Transition t) {
    return 2 * static_cast<std::size_t>(resonator) + (t == Transition::GE ? 0 : 1);
  }
  std::vector<double> phases_;
};

/// phi += detuning * dt for every pair.
PhaseAccumulators advance_phases(const PhaseAccumulators& phases, const PulseStep& step, double dt);

/// Phases at the start of `step` under the literal convention: detuning * t_start.
PhaseAccumulators literal_phases(const PulseStep& step, double t_start);

// Local operators.
CMatrix annihilation(int dim);
/// sigma^+ for the transition: |e><g| (GE) or |f><e| (EF).
CMatrix qutrit_raising(Transition t);
CMatrix qutrit_projector(int level);

Operator resonator_lowering(const SpaceLayout& layout, int resonator);
Operator resonator_number(const SpaceLayout& layout, int resonator);
Operator qutrit_operator(const SpaceLayout& layout, const CMatrix& local);
/// N_exc = sum_r a_r^dagger a_r + |e><e| + 2|f><f|; conserved by every coupling.
Operator excitation_number(const SpaceLayout& layout);

/// One rotating-wave coupling: g * (e^{i phi(t)} A + h.c.) with A = a_r sigma^+_t.
struct CouplingTerm {
  int resonator = 0;
  Transition transition = Transition::GE;
  double g = 0.0;
  double detuning = 0.0;
  Operator op;  // a_r sigma^+_t
};

/// Non-zero couplings of a step, in (resonator, GE before EF) order.
std::vector<CouplingTerm> coupling_terms(const SpaceLayout& layout, const PulseStep& step);

/// H(t) for time `t_within_step` measured from the start of `step`, with
/// `phases` holding the accumulated phases at the start of the step.
Operator interaction_hamiltonian(const SpaceLayout& layout, const PulseStep& step,
                                 const PhaseAccumulators& phases, double t_within_step);

/// {sqrt(kappa_r) a_r..., sqrt(gamma_ge) sigma^-_ge, sqrt(gamma_ef) sigma^-_ef,
///  sqrt(gamma_phi_e) |e><e|, sqrt(gamma_phi_f) |f><f|}; zero rates are omitted.
std::vector<Operator> collapse_operators(const SystemSpec& system, const SpaceLayout& layout);

}  // namespace allres

#endif  // ALLRES_MODEL_HPP
