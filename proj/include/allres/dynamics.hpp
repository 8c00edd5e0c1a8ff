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

#ifndef ALLRES_DYNAMICS_HPP
#define ALLRES_DYNAMICS_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "allres/model.hpp"
#include "allres/tensor.hpp"

namespace allres {

struct IntegratorConfig {
  double dt = 0.001;  // ns
  bool convergence_check = false;
  /// Store an interior snapshot every `sample_every` RK4 substeps (0 = boundaries only).
  int sample_every = 0;
  /// Symmetrize rho once at the end of every pulse step.
  bool rehermitize = true;
  /// Boundary eigenvalue/trace diagnostics; off for non-physical channel-basis inputs.
  bool diagnostics = true;
  /// Integrate only on the index set reachable from the initial support.
  bool restrict_to_reachable = true;
  /// Density matrices advanced together by propagate_batch.
  int batch_size = 8;
  /// Keep the state at every step boundary; otherwise only the initial and final states.
  bool record_states = true;

  void validate() const;
  /// Additionally enforces >= 100 samples per fastest detuning period of the schedule.
  void validate_for(const Schedule& schedule) const;
};

struct StepDiagnostics {
  std::string label;
  double t_start = 0.0;
  double t_end = 0.0;
  int substeps = 0;
  double trace_error = 0.0;
  double hermiticity_drift = 0.0;  // before re-Hermitization
  double min_eigenvalue = 0.0;
  double excitation_number = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<StepDiagnostics> steps;
};

/// -i[H, rho] + sum_L (2 L rho L^dagger - L^dagger L rho - rho L^dagger L) / 2, dense reference form.
CMatrix lindblad_rhs(const DensityMatrix& rho, const Operator& hamiltonian, std::span<const Operator> collapse);

/// Lindblad generator of one pulse step restricted to an index subset, with the
/// Hamiltonian's phase factors re-evaluated per call.
///
/// States are batched: row k of the (m x n^2) argument holds vec(rho_k) in
/// column-major order. Every rho_k must be Hermitian (the coherent part is
/// formed as Y + Y^dagger with Y = rho G^dagger).
class StepGenerator {
 public:
  StepGenerator(const SystemSpec& system, const PulseStep& step, const PhaseAccumulators& phases_at_start,
                std::vector<int> kept_indices);

  int dim() const { return static_cast<int>(kept_.size()); }
  const std::vector<int>& kept_indices() const { return kept_; }

  /// d rho / dt at time t (from the step start) for every row of `batch`.
  void apply(double t, const CMatrix& batch, CMatrix& out);

 private:
  struct Entry {
    int row = 0;
    int col = 0;
    Complex value;
  };
  struct Term {
    double g = 0.0;
    double phase0 = 0.0;
    double detuning = 0.0;
    std::vector<Entry> entries;  // A = a_r sigma^+_t
  };

  std::vector<int> kept_;
  RVector half_decay_;  // diagonal of K/2, K = sum L^dagger L
  std::vector<Term> terms_;
  std::vector<std::vector<Entry>> collapse_;
  CMatrix scratch_;
};

/// Indices reachable from the support of `rho` through the coupling terms
/// (both directions) of every step and through the collapse operators.
std::vector<int> reachable_indices(const CMatrix& rho, const SystemSpec& system, std::span<const PulseStep> steps);

struct StepResult {
  DensityMatrix state;
  PhaseAccumulators phases;
  StepDiagnostics diagnostics;
};

StepResult propagate_step(const DensityMatrix& rho0, const SystemSpec& system, const PulseStep& step,
                          const PhaseAccumulators& phases, const IntegratorConfig& cfg);

struct ScheduleResult {
  DensityMatrix state;
  Trajectory trajectory;
};

ScheduleResult propagate_schedule(const DensityMatrix& rho0, const SystemSpec& system, const Schedule& schedule,
                                  const IntegratorConfig& cfg);

/// propagate_schedule for many initial states, advanced `cfg.batch_size` at a
/// time on the union of their reachable sets. Results do not depend on how the
/// states are grouped.
std::vector<ScheduleResult> propagate_batch(std::span<const DensityMatrix> rho0, const SystemSpec& system,
                                            const Schedule& schedule, const IntegratorConfig& cfg);

/// Closed-form exact-resonance propagator for one resonator and one qutrit
/// transition: pairs |n, upper> and |n+1, lower> rotate with angle g t sqrt(n+1);
/// every state outside such a pair (including the Fock-cutoff edge) is left alone.
Operator resonant_propagator(double g, double t, Transition transition, const SpaceLayout& layout, int resonator);

}  // namespace allres

#endif  // ALLRES_DYNAMICS_HPP
