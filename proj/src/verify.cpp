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

#include "allres/verify.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

namespace allres {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr Complex kI(0.0, 1.0);
constexpr Complex kOne(1.0, 0.0);

constexpr double kClosedFormTol = 1e-9;
constexpr double kResonanceTol = 1e-8;
constexpr double kStateTol = 1e-5;
constexpr double kSwapTol = 1e-6;
constexpr double kQuadratureTol = 1e-10;
constexpr double kDualPathTol = 1e-9;

const char* kRoman[] = {"i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix"};

int ket_index(const char* ket, const SpaceLayout& layout) {
  const int n = layout.num_resonators();
  if (static_cast<int>(std::strlen(ket)) != n + 1) throw std::logic_error("printed ket has the wrong length");
  std::vector<int> digits(static_cast<std::size_t>(n + 1));
  const char q = ket[n];
  digits[0] = q == 'g' ? 0 : q == 'e' ? 1 : 2;
  for (int r = 0; r < n; ++r) digits[static_cast<std::size_t>(r + 1)] = ket[r] - '0';
  return layout.flat_index(digits);
}

// Amplitudes of a pure rho with the phase fixed by a real positive `ref` component.
CVector amplitudes(const CMatrix& rho, int ref) {
  const double norm = std::sqrt(std::max(rho(ref, ref).real(), 0.0));
  if (norm == 0.0) return CVector::Zero(rho.rows());
  return rho.col(ref) / norm;
}

double max_abs(const CVector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

std::string format_error(double e) {
  std::ostringstream ss;
  ss.precision(3);
  ss << std::scientific << e;
  return ss.str();
}

CheckResult make(std::string name, double error, double tol, std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.error = error;
  r.tolerance = tol;
  r.passed = std::isfinite(error) && error < tol;
  r.detail = std::move(detail);
  return r;
}

GateParams verify_params(const VerifyOptions& options, bool unitary) {
  GateParams p;
  if (unitary) p = p.unitary_limit();
  p.fault = options.fault;
  return p;
}

std::vector<double> generic_thetas(int n) {
  const double all[] = {0.3, 0.7, 1.1};
  return std::vector<double>(all, all + n);
}

}  // namespace

const std::vector<PrintedState>& printed_states() {
  const Complex p = kOne;
  const Complex m = -kOne;
  const Complex pi = kI;
  const Complex mi = -kI;
  static const std::vector<PrintedState> states = {
      {GateKind::CPHASE_11, 1, {{1, p, "00g"}, {2, p, "01g"}, {3, pi, "00e"}, {4, pi, "01e"}}},
      {GateKind::CPHASE_11, 2, {{1, p, "00g"}, {2, p, "01g"}, {3, pi, "00e"}, {4, mi, "01e"}}},
      {GateKind::CPHASE_11, 3, {{1, p, "00g"}, {2, p, "01g"}, {3, p, "10g"}, {4, m, "11g"}}},
      {GateKind::CPHASE_10, 3, {{1, p, "00g"}, {2, p, "01g"}, {3, m, "10g"}, {4, p, "11g"}}},
      {GateKind::CCPHASE, 1,
       {{1, p, "000g"}, {2, p, "001g"}, {3, p, "010g"}, {4, p, "011g"},
        {5, mi, "000e"}, {6, mi, "001e"}, {7, mi, "010e"}, {8, mi, "011e"}}},
      {GateKind::CCPHASE, 2,
       {{1, p, "000g"}, {2, p, "001g"}, {3, p, "010g"}, {4, p, "011g"},
        {5, mi, "000e"}, {6, mi, "001e"}, {7, m, "000f"}, {8, m, "001f"}}},
      {GateKind::CCPHASE, 3,
       {{1, p, "000g"}, {2, p, "001g"}, {3, p, "010g"}, {4, p, "011g"},
        {5, m, "100g"}, {6, m, "101g"}, {7, m, "000f"}, {8, m, "001f"}}},
      {GateKind::CCPHASE, 4,
       {{1, p, "000g"}, {2, p, "001g"}, {3, p, "010g"}, {4, p, "011g"},
        {5, m, "100g"}, {6, m, "101g"}, {7, pi, "100e"}, {8, pi, "101e"}}},
      {GateKind::CCPHASE, 5,
       {{1, p, "000g"}, {2, p, "001g"}, {3, p, "010g"}, {4, p, "011g"},
        {5, m, "100g"}, {6, m, "101g"}, {7, pi, "100e"}, {8, mi, "101e"}}},
      {GateKind::CCPHASE, 6,
       {{1, p, "000g"}, {2, p, "001g"}, {3, p, "010g"}, {4, p, "011g"},
        {5, m, "100g"}, {6, m, "101g"}, {7, p, "000f"}, {8, m, "001f"}}},
      {GateKind::CCPHASE, 7,
       {{1, p, "000g"}, {2, p, "001g"}, {3, p, "010g"}, {4, p, "011g"},
        {5, pi, "000e"}, {6, pi, "001e"}, {7, p, "000f"}, {8, m, "001f"}}},
      {GateKind::CCPHASE, 8,
       {{1, p, "000g"}, {2, p, "001g"}, {3, p, "010g"}, {4, p, "011g"},
        {5, pi, "000e"}, {6, pi, "001e"}, {7, mi, "010e"}, {8, pi, "011e"}}},
      {GateKind::CCPHASE, 9,
       {{1, p, "000g"}, {2, p, "001g"}, {3, p, "010g"}, {4, p, "011g"},
        {5, p, "100g"}, {6, p, "101g"}, {7, m, "110g"}, {8, p, "111g"}}},
  };
  return states;
}

CVector printed_state_vector(const PrintedState& state, std::span<const double> thetas, const SpaceLayout& layout) {
  const RVector beta = product_amplitudes(thetas);
  CVector psi = CVector::Zero(layout.total_dim());
  for (const StateTerm& t : state.terms) psi(ket_index(t.ket, layout)) += beta(t.beta - 1) * t.coeff;
  return psi;
}

Operator compose_resonant(const Schedule& schedule, const SpaceLayout& layout, int steps) {
  Operator u = identity(layout);
  for (int s = 0; s < steps; ++s) {
    const PulseStep& step = schedule.steps.at(static_cast<std::size_t>(s));
    u = resonant_propagator(step.addressed_coupling(), step.duration, step.addressed.transition, layout,
                            step.addressed.resonator) *
        u;
  }
  return u;
}

std::vector<CheckResult> run_verify(const VerifyOptions& options,
                                    const std::function<void(const CheckResult&)>& on_result) {
  std::vector<CheckResult> results;
  auto emit = [&](CheckResult r) {
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  };
  // A check that throws fails with the exception text as detail.
  auto guarded = [&](const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      CheckResult r;
      r.name = name;
      r.passed = false;
      r.error = std::numeric_limits<double>::infinity();
      r.detail = e.what();
      emit(std::move(r));
    }
  };
  const IntegratorConfig& cfg = options.exec.integrator;

  // Single-resonator resonance processes: |in> -> -i |out>.
  struct Process {
    const char* name;
    Transition transition;
    double area;  // g t
    const char* in;
    const char* out;
  };
  const double s2 = std::sqrt(2.0);
  const Process processes[] = {
      {"(a)", Transition::GE, kPi / 2, "1g", "0e"}, {"(a)", Transition::GE, kPi / 2, "0e", "1g"},
      {"(b)", Transition::GE, kPi / (2 * s2), "1e", "2g"}, {"(b)", Transition::GE, kPi / (2 * s2), "2g", "1e"},
      {"(c)", Transition::EF, kPi / 2, "1e", "0f"}, {"(c)", Transition::EF, kPi / 2, "0f", "1e"},
      {"(d)", Transition::EF, kPi / (2 * s2), "1f", "2e"}, {"(d)", Transition::EF, kPi / (2 * s2), "2e", "1f"},
  };
  for (int p = 0; p < 8; p += 2) {
    const std::string name = std::string("resonance process ") + processes[p].name;
    guarded(name, [&] {
      SystemSpec system;
      system.resonators.push_back(ResonatorSpec{ghz(5.5), 0.0, 3});
      const SpaceLayout layout = system.layout();
      double error = 0.0;
      for (int k = p; k < p + 2; ++k) {
        const Process& pr = processes[k];
        const double g = mhz(45.0);
        const bool ge = pr.transition == Transition::GE;
        const PulseStep step = make_pulse_step(system, Addressed{0, pr.transition}, pr.area, {ge ? g : 0.0},
                                               {ge ? 0.0 : g}, "process");
        const int ref = ket_index("0g", layout);
        const int in = ket_index(pr.in, layout);
        const int out = ket_index(pr.out, layout);
        CVector psi0 = CVector::Zero(layout.total_dim());
        psi0(ref) = 1.0 / s2;
        psi0(in) = 1.0 / s2;
        const CVector closed = resonant_propagator(g, step.duration, pr.transition, layout, 0).matrix * psi0;
        const DensityMatrix rho0 = to_density(StateVector{layout, psi0});
        const StepResult num = propagate_step(rho0, system, step, PhaseAccumulators(1), cfg);
        error = std::max(error, (amplitudes(num.state.matrix, ref) - closed).norm());
        // printed coefficient -i
        error = std::max(error, std::abs(closed(out) - (-kI / s2)));
      }
      emit(make(name, error, kResonanceTol, "integrated vs closed form, and -i coefficient"));
    });
  }

  // Printed intermediate and final states.
  for (GateKind kind : {GateKind::CPHASE_11, GateKind::CPHASE_10, GateKind::CCPHASE}) {
    const std::string gate(to_string(kind));
    const GateParams params = verify_params(options, true);
    const Schedule schedule = build_schedule(kind, params);
    const SystemSpec system = params.system(kind);
    const SpaceLayout layout = system.layout();
    const std::vector<int> comp = computational_indices(layout);
    const int n = num_resonators(kind);

    std::vector<const PrintedState*> printed;
    for (const PrintedState& ps : printed_states()) {
      if (ps.kind == kind) printed.push_back(&ps);
    }
    for (const PrintedState* ps : printed) {
      const std::string name = gate + " step " + kRoman[ps->after_step - 1] + " state (closed form)";
      guarded(name, [&] {
        const Operator u = compose_resonant(schedule, layout, ps->after_step);
        double error = 0.0;
        for (std::size_t j = 0; j < comp.size(); ++j) {
          std::vector<double> thetas(static_cast<std::size_t>(n));
          for (int r = 0; r < n; ++r) thetas[static_cast<std::size_t>(r)] = ((j >> (n - 1 - r)) & 1U) ? kPi / 2 : 0.0;
          const CVector expected = printed_state_vector(*ps, thetas, layout);
          const CVector got = u.matrix.col(comp[j]);
          error = std::max(error, max_abs(got - expected));
        }
        emit(make(name, error, kClosedFormTol, "every computational basis input"));
      });
    }

    const std::string name = gate + " printed states (integrated)";
    guarded(name, [&] {
      const std::vector<double> thetas = generic_thetas(n);
      const DensityMatrix rho0 = to_density(initial_state(thetas, layout));
      const ScheduleResult run = propagate_schedule(rho0, system, schedule, cfg);
      enforce_physicality(run.trajectory, true);
      const int ref = comp.front();
      for (const PrintedState* ps : printed) {
        const std::string step_name = gate + " step " + kRoman[ps->after_step - 1] + " state (integrated)";
        const CVector expected = printed_state_vector(*ps, thetas, layout);
        const CVector got = amplitudes(run.trajectory.states.at(static_cast<std::size_t>(ps->after_step)).matrix, ref);
        emit(make(step_name, max_abs(got - expected), kStateTol, "amplitudes, theta = generic"));
      }
    });
  }

  // SWAP: photon numbers exchanged, qutrit back in |g>.
  guarded("swap photon exchange", [&] {
    const GateParams params = verify_params(options, true);
    const Schedule schedule = build_schedule(GateKind::SWAP, params);
    const SystemSpec system = params.system(GateKind::SWAP);
    const SpaceLayout layout = system.layout();
    const Operator na = resonator_number(layout, 0);
    const Operator nb = resonator_number(layout, 1);
    const Operator g_proj = qutrit_operator(layout, qutrit_projector(0));
    const Operator u = compose_resonant(schedule, layout, static_cast<int>(schedule.steps.size()));
    double err_closed = 0.0;
    double err_num = 0.0;
    for (const double ta : {0.0, kPi / 2}) {
      for (const double tb : {0.0, kPi / 2}) {
        const std::vector<double> thetas{ta, tb};
        const StateVector psi0 = initial_state(thetas, layout);
        const double a0 = expectation(psi0, na).real();
        const double b0 = expectation(psi0, nb).real();
        const StateVector cf = apply(u, psi0);
        err_closed = std::max({err_closed, std::abs(expectation(cf, na).real() - b0),
                               std::abs(expectation(cf, nb).real() - a0),
                               std::abs(1.0 - expectation(cf, g_proj).real())});
        const ScheduleResult run = propagate_schedule(to_density(psi0), system, schedule, cfg);
        enforce_physicality(run.trajectory, true);
        err_num = std::max({err_num, std::abs(expectation(run.state, na).real() - b0),
                            std::abs(expectation(run.state, nb).real() - a0),
                            std::abs(1.0 - expectation(run.state, g_proj).real())});
      }
    }
    emit(make("swap photon exchange (closed form)", err_closed, kSwapTol, "<n_a>, <n_b> and qutrit |g> population"));
    emit(make("swap photon exchange (integrated)", err_num, kSwapTol, "<n_a>, <n_b> and qutrit |g> population"));
  });

  guarded("identity channel average", [&] {
    const ProcessMatrix id = unitary_channel(GateKind::CPHASE_11, CMatrix::Identity(4, 4));
    const double f = average_fidelity_channel(id, GateKind::CPHASE_11, QuadratureSpec{8});
    emit(make("identity channel average", std::abs(f - 9.0 / 16.0), kQuadratureTol, "cphase target, analytic 9/16"));
  });

  // Quadrature exactness and dual-path agreement at the defaults.
  for (GateKind kind : kAllGateKinds) {
    if (options.quick && kind == GateKind::CCPHASE) continue;
    const std::string gate(to_string(kind));
    GateParams params;
    params.fault = options.fault;
    guarded(gate + " quadrature exactness", [&] {
      const ProcessMatrix ch = reconstruct_channel(kind, params, options.exec);
      const double f5 = average_fidelity_channel(ch, kind, QuadratureSpec{5});
      const double f8 = average_fidelity_channel(ch, kind, QuadratureSpec{8});
      const double f16 = average_fidelity_channel(ch, kind, QuadratureSpec{16});
      const double spread = std::max({f5, f8, f16}) - std::min({f5, f8, f16});
      emit(make(gate + " quadrature exactness", spread, kQuadratureTol, "M = 5, 8, 16; F = " + std::to_string(f8)));
      const AveragedFidelity direct = average_fidelity_direct(kind, params, QuadratureSpec{5}, options.exec);
      emit(make(gate + " dual-path agreement", std::abs(direct.fidelity - f8), kDualPathTol,
                "direct M = 5 vs channel M = 8; |dF| = " + format_error(std::abs(direct.fidelity - f8))));
    });
  }
  return results;
}

}  // namespace allres
