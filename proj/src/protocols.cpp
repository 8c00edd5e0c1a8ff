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

#include "allres/protocols.hpp"

#include <algorithm>
#include <numbers>

namespace allres {

namespace {

constexpr double kPi = std::numbers::pi;

// Invariant tolerances for physical trajectories.
constexpr double kTraceTol = 1e-8;
constexpr double kHermiticityTol = 1e-9;
constexpr double kPositivityFloor = -1e-7;
constexpr double kExcitationTol = 1e-8;

struct StepPlan {
  int resonator;
  Transition transition;
  double area;
  double g_on_ge;  // GE coupling of the addressed resonator while switched on
};

// Couplings for one step: the addressed resonator at its "on" value, every other
// resonator at the residual value, EF couplings by the transmon ratio.
PulseStep build_step(const GateParams& p, const SystemSpec& system, StepPlan plan, int index) {
  const int n = system.num_resonators();
  double area = plan.area;
  double g_on = plan.g_on_ge;
  if (p.fault == ScheduleFault::Step2Area && index == 1) {
    area = -0.5 * area;
    g_on = -g_on;
  }
  std::vector<double> g_ge(static_cast<std::size_t>(n), 0.0);
  std::vector<double> g_ef(static_cast<std::size_t>(n), 0.0);
  for (int r = 0; r < n; ++r) {
    const double g = r == plan.resonator ? g_on : p.g_min;
    g_ge[static_cast<std::size_t>(r)] = g;
    g_ef[static_cast<std::size_t>(r)] = p.ef_ratio * g;
  }
  if (p.ideal_couplings) {
    for (int r = 0; r < n; ++r) {
      if (r != plan.resonator || plan.transition != Transition::GE) g_ge[static_cast<std::size_t>(r)] = 0.0;
      if (r != plan.resonator || plan.transition != Transition::EF) g_ef[static_cast<std::size_t>(r)] = 0.0;
    }
  }
  static constexpr const char* kRoman[] = {"i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix"};
  std::string label = index < 9 ? kRoman[index] : std::to_string(index + 1);
  return make_pulse_step(system, Addressed{plan.resonator, plan.transition}, area, std::move(g_ge), std::move(g_ef),
                         std::move(label));
}

Schedule assemble(const GateParams& p, GateKind kind, std::span<const StepPlan> plans) {
  p.validate();
  const SystemSpec system = p.system(kind);
  Schedule s;
  s.phase_convention = p.phase_convention;
  for (std::size_t i = 0; i < plans.size(); ++i) s.steps.push_back(build_step(p, system, plans[i], static_cast<int>(i)));
  return s;
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::CPHASE_11: return "cphase";
    case GateKind::CPHASE_10: return "cphase10";
    case GateKind::CCPHASE: return "ccphase";
    case GateKind::SWAP: return "swap";
  }
  return "?";
}

GateKind parse_gate_kind(std::string_view name) {
  for (GateKind k : kAllGateKinds) {
    if (to_string(k) == name) return k;
  }
  throw UsageError("unknown gate kind '" + std::string(name) + "' (expected cphase, cphase10, ccphase or swap)");
}

int num_resonators(GateKind kind) { return kind == GateKind::CCPHASE ? 3 : 2; }

std::string_view to_string(Table2Mode mode) { return mode == Table2Mode::Sqrt2 ? "sqrt2" : "listed"; }

Table2Mode parse_table2_mode(std::string_view name) {
  if (name == "sqrt2") return Table2Mode::Sqrt2;
  if (name == "listed") return Table2Mode::Listed;
  throw UsageError("unknown table2 mode '" + std::string(name) + "' (expected sqrt2 or listed)");
}

GateParams GateParams::without_decoherence() const {
  GateParams p = *this;
  p.kappa = {0.0, 0.0, 0.0};
  p.qutrit.gamma_ge = p.qutrit.gamma_ef = p.qutrit.gamma_phi_e = p.qutrit.gamma_phi_f = 0.0;
  return p;
}

bool GateParams::has_decoherence(GateKind kind) const {
  return qutrit.gamma_ge != 0.0 || qutrit.gamma_ef != 0.0 || qutrit.gamma_phi_e != 0.0 || qutrit.gamma_phi_f != 0.0 ||
         std::any_of(kappa.begin(), kappa.begin() + num_resonators(kind), [](double k) { return k != 0.0; });
}

GateParams GateParams::unitary_limit() const {
  GateParams p = without_decoherence();
  p.ideal_couplings = true;
  return p;
}

SystemSpec GateParams::system(GateKind kind) const {
  SystemSpec s;
  s.qutrit = qutrit;
  for (int r = 0; r < num_resonators(kind); ++r) {
    s.resonators.push_back(ResonatorSpec{omega[static_cast<std::size_t>(r)], kappa[static_cast<std::size_t>(r)], fock_cutoff});
  }
  return s;
}

void GateParams::validate() const {
  qutrit.validate();
  for (std::size_t r = 0; r < omega.size(); ++r) {
    ResonatorSpec{omega[r], kappa[r], fock_cutoff}.validate();
  }
  if (!std::isfinite(g_min) || g_min < 0.0) throw ConfigError("g_min must be finite and >= 0");
  if (!positive_finite(ef_ratio)) throw ConfigError("ef_ratio must be > 0");
  if (!positive_finite(g_a_on) || !positive_finite(g_b_on) || !positive_finite(g_swap_b_ge)) {
    throw ConfigError("resonance unsatisfiable: switched-on couplings must be > 0");
  }
  for (double g : ccphase_table) {
    if (!positive_finite(g)) throw ConfigError("resonance unsatisfiable: cc-phase table couplings must be > 0");
  }
}

Schedule schedule_cphase(const GateParams& params, GateKind variant) {
  if (variant != GateKind::CPHASE_11 && variant != GateKind::CPHASE_10) {
    throw UsageError("schedule_cphase: variant must be CPHASE_11 or CPHASE_10");
  }
  const double first = variant == GateKind::CPHASE_11 ? 1.5 * kPi : 0.5 * kPi;
  const std::array<StepPlan, 3> plans{{
      {0, Transition::GE, first, params.g_a_on},
      {1, Transition::EF, kPi, params.g_b_on},
      {0, Transition::GE, 0.5 * kPi, params.g_a_on},
  }};
  return assemble(params, variant, plans);
}

Schedule schedule_ccphase(const GateParams& params) {
  struct Row {
    int resonator;
    Transition transition;
    double area;
  };
  static constexpr std::array<Row, 9> kRows{{
      {0, Transition::GE, 0.5 * kPi},
      {1, Transition::EF, 0.5 * kPi},
      {0, Transition::GE, 0.5 * kPi},
      {0, Transition::EF, 0.5 * kPi},
      {2, Transition::EF, kPi},
      {0, Transition::EF, 0.5 * kPi},
      {0, Transition::GE, 0.5 * kPi},
      {1, Transition::EF, 0.5 * kPi},
      {0, Transition::GE, 0.5 * kPi},
  }};
  std::array<StepPlan, 9> plans{};
  for (std::size_t i = 0; i < kRows.size(); ++i) {
    double g_on = params.ccphase_table[i];
    if (kRows[i].transition == Transition::EF && params.table2_mode == Table2Mode::Listed) {
      g_on /= params.ef_ratio;
    }
    plans[i] = StepPlan{kRows[i].resonator, kRows[i].transition, kRows[i].area, g_on};
  }
  return assemble(params, GateKind::CCPHASE, plans);
}

Schedule schedule_swap(const GateParams& params) {
  const std::array<StepPlan, 5> plans{{
      {0, Transition::GE, 0.5 * kPi, params.g_a_on},
      {1, Transition::EF, 0.5 * kPi, params.g_b_on},
      {1, Transition::GE, 1.5 * kPi, params.g_swap_b_ge},
      {1, Transition::EF, 0.5 * kPi, params.g_b_on},
      {0, Transition::GE, 0.5 * kPi, params.g_a_on},
  }};
  return assemble(params, GateKind::SWAP, plans);
}

Schedule build_schedule(GateKind kind, const GateParams& params) {
  switch (kind) {
    case GateKind::CPHASE_11:
    case GateKind::CPHASE_10: return schedule_cphase(params, kind);
    case GateKind::CCPHASE: return schedule_ccphase(params);
    case GateKind::SWAP: return schedule_swap(params);
  }
  throw UsageError("unknown gate kind");
}

std::vector<int> computational_indices(const SpaceLayout& layout) {
  if (!layout.is_qutrit_layout()) throw UsageError("computational_indices: layout has no qutrit factor");
  const int n = layout.num_resonators();
  std::vector<int> idx(std::size_t{1} << n);
  for (std::size_t s = 0; s < idx.size(); ++s) {
    int flat = 0;
    for (int r = 0; r < n; ++r) {
      const int bit = static_cast<int>((s >> (n - 1 - r)) & 1U);
      flat += bit * layout.stride(r + 1);
    }
    idx[s] = flat;
  }
  return idx;
}

RVector product_amplitudes(std::span<const double> thetas) {
  const auto n = static_cast<int>(thetas.size());
  RVector c(Eigen::Index{1} << n);
  for (Eigen::Index s = 0; s < c.size(); ++s) {
    double v = 1.0;
    for (int r = 0; r < n; ++r) {
      const bool one = ((s >> (n - 1 - r)) & 1) != 0;
      v *= one ? std::sin(thetas[static_cast<std::size_t>(r)]) : std::cos(thetas[static_cast<std::size_t>(r)]);
    }
    c(s) = v;
  }
  return c;
}

StateVector initial_state(std::span<const double> thetas, const SpaceLayout& layout) {
  if (!layout.is_qutrit_layout()) throw UsageError("initial_state: layout has no qutrit factor");
  if (static_cast<int>(thetas.size()) != layout.num_resonators()) {
    throw UsageError("initial_state: expected " + std::to_string(layout.num_resonators()) + " angles, got " +
                     std::to_string(thetas.size()));
  }
  const RVector c = product_amplitudes(thetas);
  const std::vector<int> idx = computational_indices(layout);
  CVector psi = CVector::Zero(layout.total_dim());
  for (std::size_t s = 0; s < idx.size(); ++s) psi(idx[s]) = c(static_cast<Eigen::Index>(s));
  psi.normalize();
  return StateVector{layout, std::move(psi)};
}

CMatrix ideal_unitary(GateKind kind) {
  switch (kind) {
    case GateKind::CPHASE_11: {
      CMatrix u = CMatrix::Identity(4, 4);
      u(3, 3) = -1.0;
      return u;
    }
    case GateKind::CPHASE_10: {
      CMatrix u = CMatrix::Identity(4, 4);
      u(2, 2) = -1.0;
      return u;
    }
    case GateKind::CCPHASE: {
      CMatrix u = CMatrix::Identity(8, 8);
      u(6, 6) = -1.0;  // |1>_a |1>_b |0>_c
      return u;
    }
    case GateKind::SWAP: {
      CMatrix u = CMatrix::Zero(4, 4);
      u(0, 0) = 1.0;
      u(2, 1) = 1.0;
      u(1, 2) = 1.0;
      u(3, 3) = 1.0;
      return u;
    }
  }
  throw UsageError("unknown gate kind");
}

StateVector ideal_state(GateKind kind, std::span<const double> thetas, const SpaceLayout& layout) {
  if (layout.num_resonators() != num_resonators(kind)) throw UsageError("ideal_state: layout does not match gate");
  const StateVector psi0 = initial_state(thetas, layout);
  const std::vector<int> idx = computational_indices(layout);
  CVector c(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t s = 0; s < idx.size(); ++s) c(static_cast<Eigen::Index>(s)) = psi0.amplitudes(idx[s]);
  const CVector out = ideal_unitary(kind) * c;
  CVector psi = CVector::Zero(layout.total_dim());
  for (std::size_t s = 0; s < idx.size(); ++s) psi(idx[s]) = out(static_cast<Eigen::Index>(s));
  return StateVector{layout, std::move(psi)};
}

void enforce_physicality(const Trajectory& trajectory, bool unitary) {
  const double exc0 = trajectory.steps.empty() ? 0.0 : trajectory.steps.front().excitation_number;
  double reference = exc0;
  if (!trajectory.states.empty()) {
    const DensityMatrix& rho0 = trajectory.states.front();
    reference = expectation(rho0, excitation_number(rho0.layout)).real();
  }
  for (const StepDiagnostics& d : trajectory.steps) {
    const std::string where = " after step " + d.label;
    if (d.trace_error >= kTraceTol) throw InvariantError("trace preservation violated" + where);
    if (d.hermiticity_drift >= kHermiticityTol) throw InvariantError("Hermiticity violated" + where);
    if (d.min_eigenvalue < kPositivityFloor) throw InvariantError("positivity violated" + where);
    if (unitary && std::abs(d.excitation_number - reference) >= kExcitationTol) {
      throw InvariantError("excitation-number conservation violated" + where);
    }
  }
}

GateReport run_gate(GateKind kind, const GateParams& params, std::span<const double> thetas,
                    const IntegratorConfig& cfg) {
  GateReport report;
  report.kind = kind;
  report.params = params;
  report.integrator = cfg;
  report.thetas.assign(thetas.begin(), thetas.end());
  report.schedule = build_schedule(kind, params);
  cfg.validate_for(report.schedule);
  const SystemSpec system = params.system(kind);
  const SpaceLayout layout = system.layout();
  report.initial_state = to_density(initial_state(thetas, layout));
  ScheduleResult result = propagate_schedule(report.initial_state, system, report.schedule, cfg);
  report.final_state = std::move(result.state);
  report.trajectory = std::move(result.trajectory);
  report.total_duration = report.schedule.total_duration();
  const bool unitary = !params.has_decoherence(kind);
  enforce_physicality(report.trajectory, unitary);
  const StateVector target = ideal_state(kind, thetas, layout);
  report.fidelity = target.amplitudes.dot(report.final_state.matrix * target.amplitudes).real();
  return report;
}

}  // namespace allres
