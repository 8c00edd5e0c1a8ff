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

#ifndef ALLRES_PROTOCOLS_HPP
#define ALLRES_PROTOCOLS_HPP

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "allres/dynamics.hpp"
#include "allres/model.hpp"

namespace allres {

enum class GateKind { CPHASE_11, CPHASE_10, CCPHASE, SWAP };

inline constexpr std::array<GateKind, 4> kAllGateKinds = {GateKind::CPHASE_11, GateKind::CPHASE_10,
                                                          GateKind::CCPHASE, GateKind::SWAP};

/// Command-line name: cphase, cphase10, ccphase, swap.
std::string_view to_string(GateKind kind);
GateKind parse_gate_kind(std::string_view name);
int num_resonators(GateKind kind);

/// How the cc-phase coupling table is read for EF-addressed steps.
enum class Table2Mode {
  Sqrt2,   // listed number is g_ge of the addressed resonator, g_ef = ef_ratio * listed
  Listed,  // listed number is the addressed EF coupling itself
};

std::string_view to_string(Table2Mode mode);
Table2Mode parse_table2_mode(std::string_view name);

/// Test-only schedule corruptions used by the verification suite's mutation check.
enum class ScheduleFault { None, Step2Area };

struct GateParams {
  std::array<double, 3> omega{ghz(5.5), ghz(7.0), ghz(8.0)};
  std::array<double, 3> kappa{per_us(50.0), per_us(50.0), per_us(50.0)};
  QutritSpec qutrit{per_us(50.0), per_us(25.0), per_us(50.0), per_us(50.0), ghz(0.8)};
  int fock_cutoff = 3;

  /// Residual GE coupling of every resonator that is not addressed.
  double g_min = mhz(0.5);
  /// g_ef / g_ge for one resonator (transmon matrix elements).
  double ef_ratio = std::sqrt(2.0);
  /// GE couplings of r_a and r_b when switched on (c-phase and SWAP).
  double g_a_on = mhz(45.0);
  double g_b_on = mhz(22.0);
  /// GE coupling of r_b for the SWAP's GE-addressed step.
  double g_swap_b_ge = mhz(22.0);
  /// Per-step coupling column of the cc-phase table.
  std::array<double, 9> ccphase_table{mhz(45.0), mhz(28.0), mhz(27.0), mhz(24.0), mhz(20.0),
                                      mhz(29.0), mhz(27.0), mhz(28.0), mhz(45.0)};
  Table2Mode table2_mode = Table2Mode::Sqrt2;
  PhaseConvention phase_convention = PhaseConvention::Literal;

  /// Zero every coupling except the addressed (resonator, transition) pair.
  bool ideal_couplings = false;
  ScheduleFault fault = ScheduleFault::None;

  /// Decoherence off and ideal couplings.
  GateParams unitary_limit() const;
  GateParams without_decoherence() const;
  /// Any nonzero rate among the qutrit and the resonators used by `kind`.
  bool has_decoherence(GateKind kind) const;
  SystemSpec system(GateKind kind) const;
  void validate() const;
};

Schedule schedule_cphase(const GateParams& params, GateKind variant);
Schedule schedule_ccphase(const GateParams& params);
Schedule schedule_swap(const GateParams& params);
Schedule build_schedule(GateKind kind, const GateParams& params);

/// Flat indices of |n_a n_b ...> |g>, n_r in {0, 1}, with r_a as the most significant bit.
std::vector<int> computational_indices(const SpaceLayout& layout);

/// Real amplitudes of (x)_r (cos theta_r |0> + sin theta_r |1>) in computational order.
RVector product_amplitudes(std::span<const double> thetas);

/// (x)_r (cos theta_r |0> + sin theta_r |1>) (x) |g>.
StateVector initial_state(std::span<const double> thetas, const SpaceLayout& layout);

/// Target map on the computational subspace.
CMatrix ideal_unitary(GateKind kind);

/// (ideal_unitary(kind) applied to the product state) (x) |g>.
StateVector ideal_state(GateKind kind, std::span<const double> thetas, const SpaceLayout& layout);

struct GateReport {
  GateKind kind = GateKind::CPHASE_11;
  GateParams params;
  IntegratorConfig integrator;
  std::vector<double> thetas;
  Schedule schedule;
  DensityMatrix initial_state;
  DensityMatrix final_state;
  Trajectory trajectory;
  double total_duration = 0.0;
  double fidelity = 0.0;
};

/// Throws InvariantError naming the first violated invariant. `unitary` adds
/// the excitation-number conservation check.
void enforce_physicality(const Trajectory& trajectory, bool unitary);

/// Single initial state: builds schedule and product state, propagates, and
/// returns <psi_ideal| rho_f |psi_ideal>.
GateReport run_gate(GateKind kind, const GateParams& params, std::span<const double> thetas,
                    const IntegratorConfig& cfg);

}  // namespace allres

#endif  // ALLRES_PROTOCOLS_HPP
