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


#include <doctest.h>

#include <cmath>
#include <vector>

#include "allres/dynamics.hpp"
#include "allres/protocols.hpp"

using namespace allres;

namespace {

SystemSpec spec(double kappa_b, QutritSpec q) {
  SystemSpec s;
  s.qutrit = q;
  s.resonators = {ResonatorSpec{ghz(5.5), 0.0, 3}, ResonatorSpec{ghz(7.0), kappa_b, 3}};
  return s;
}

// GE on r_a only; r_b and EF are uncoupled, so |f> and photons in r_b are dark.
PulseStep ge_a_step(const SystemSpec& s, double area) {
  return make_pulse_step(s, {0, Transition::GE}, area, {mhz(45.0), 0.0}, {0.0, 0.0});
}

DensityMatrix basis(const SpaceLayout& layout, std::vector<int> m) {
  return to_density(basis_state(layout, m));
}

CMatrix random_density(int n, unsigned seed) {
  std::srand(seed);
  CMatrix a = CMatrix::Random(n, n);
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

}  // namespace

TEST_CASE("single-photon decay follows exp(-kappa t)") {
  const double kappa = 0.02;
  const SystemSpec s = spec(kappa, QutritSpec{});
  const SpaceLayout layout = s.layout();
  const PulseStep step = ge_a_step(s, 20.0 * M_PI);
  const ScheduleResult r =
      propagate_schedule(basis(layout, {0, 0, 1}), s, Schedule{{step}}, IntegratorConfig{});
  const double n = expectation(r.state, resonator_number(layout, 1)).real();
  CHECK(n == doctest::Approx(std::exp(-kappa * step.duration)).epsilon(1e-10));
  CHECK(std::abs(r.state.matrix.trace() - 1.0) < 1e-12);
}

TEST_CASE("pure dephasing of |f> damps the g-f coherence at half the rate") {
  QutritSpec q;
  q.gamma_phi_f = 0.01;
  const SystemSpec s = spec(0.0, q);
  const SpaceLayout layout = s.layout();
  CVector psi = CVector::Zero(layout.total_dim());
  const std::vector<int> g = {0, 0, 0};
  const std::vector<int> f = {2, 0, 0};
  psi(layout.flat_index(g)) = M_SQRT1_2;
  psi(layout.flat_index(f)) = M_SQRT1_2;
  const PulseStep step = ge_a_step(s, 10.0 * M_PI);
  const ScheduleResult r = propagate_schedule(to_density(StateVector{layout, psi}), s, Schedule{{step}},
                                              IntegratorConfig{});
  const Complex c = r.state.matrix(layout.flat_index(g), layout.flat_index(f));
  CHECK(std::abs(c) == doctest::Approx(0.5 * std::exp(-0.5 * 0.01 * step.duration)).epsilon(1e-10));
}

TEST_CASE("resonant exchange matches the closed-form propagator") {
  const SystemSpec s = spec(0.0, QutritSpec{});
  const SpaceLayout layout = s.layout();
  for (double area : {0.5 * M_PI, 0.37 * M_PI, 1.5 * M_PI}) {
    const PulseStep step = ge_a_step(s, area);
    const DensityMatrix rho0 = basis(layout, {0, 1, 0});
    const ScheduleResult r = propagate_schedule(rho0, s, Schedule{{step}}, IntegratorConfig{});
    const Operator u = resonant_propagator(mhz(45.0), step.duration, Transition::GE, layout, 0);
    const CMatrix expected = u.matrix * rho0.matrix * u.matrix.adjoint();
    CHECK((r.state.matrix - expected).norm() < 1e-9);
  }
}

TEST_CASE("restricted generator equals the dense Lindblad right-hand side") {
  const SystemSpec s = spec(per_us(50.0), QutritSpec{per_us(50.0), per_us(25.0), per_us(40.0), per_us(30.0), ghz(0.8)});
  const SpaceLayout layout = s.layout();
  const PulseStep step = make_pulse_step(s, {1, Transition::EF}, M_PI, {mhz(0.5), mhz(22.0)},
                                         {mhz(0.7), mhz(31.1)});
  const PhaseAccumulators phases = literal_phases(step, 2.0);
  const int n = layout.total_dim();
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  StepGenerator gen(s, step, phases, all);
  const DensityMatrix rho{layout, random_density(n, 7)};
  const double t = 0.731;
  CMatrix batch(1, n * n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) batch(0, c * n + r) = rho.matrix(r, c);
  }
  CMatrix out(1, n * n);
  gen.apply(t, batch, out);
  const Operator h = interaction_hamiltonian(layout, step, phases, t);
  const std::vector<Operator> c = collapse_operators(s, layout);
  const CMatrix dense = lindblad_rhs(rho, h, c);
  double err = 0.0;
  for (int col = 0; col < n; ++col) {
    for (int r = 0; r < n; ++r) err = std::max(err, std::abs(out(0, col * n + r) - dense(r, col)));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("reachable closure keeps exact results") {
  GateParams p;
  const SystemSpec s = p.system(GateKind::CPHASE_11);
  const Schedule sched = build_schedule(GateKind::CPHASE_11, p);
  const SpaceLayout layout = s.layout();
  const std::vector<double> th = {0.4, 1.1};
  const DensityMatrix rho0 = to_density(initial_state(th, layout));
  IntegratorConfig restricted;
  IntegratorConfig full;
  full.restrict_to_reachable = false;
  const ScheduleResult a = propagate_schedule(rho0, s, sched, restricted);
  const ScheduleResult b = propagate_schedule(rho0, s, sched, full);
  CHECK((a.state.matrix - b.state.matrix).norm() < 1e-13);
  CHECK(reachable_indices(rho0.matrix, s, sched.steps).size() < static_cast<std::size_t>(layout.total_dim()));
}

TEST_CASE("batched propagation is bit-identical to one-at-a-time") {
  GateParams p;
  const SystemSpec s = p.system(GateKind::CPHASE_11);
  const Schedule sched = build_schedule(GateKind::CPHASE_11, p);
  const SpaceLayout layout = s.layout();
  std::vector<DensityMatrix> inputs;
  for (double a : {0.1, 0.5, 0.9}) {
    const std::vector<double> th = {a, 1.3 - a};
    inputs.push_back(to_density(initial_state(th, layout)));
  }
  IntegratorConfig cfg;
  cfg.batch_size = 2;
  const std::vector<ScheduleResult> batched = propagate_batch(inputs, s, sched, cfg);
  REQUIRE(batched.size() == inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const ScheduleResult single = propagate_schedule(inputs[i], s, sched, IntegratorConfig{});
    CHECK(batched[i].state.matrix == single.state.matrix);
  }
}

TEST_CASE("trajectory diagnostics: trace, Hermiticity, positivity") {
  GateParams p;
  const SystemSpec s = p.system(GateKind::CPHASE_11);
  const Schedule sched = build_schedule(GateKind::CPHASE_11, p);
  const std::vector<double> th = {0.7, 0.2};
  IntegratorConfig cfg;
  cfg.sample_every = 500;
  const ScheduleResult r = propagate_schedule(to_density(initial_state(th, s.layout())), s, sched, cfg);
  CHECK(r.trajectory.steps.size() == 3);
  CHECK(r.trajectory.states.size() == r.trajectory.times.size());
  CHECK(r.trajectory.states.size() > 4);
  for (const StepDiagnostics& d : r.trajectory.steps) {
    CHECK(d.trace_error < 1e-8);
    CHECK(d.hermiticity_drift < 1e-9);
    CHECK(d.min_eigenvalue > -1e-7);
  }
  CHECK(r.trajectory.steps.back().t_end == doctest::Approx(sched.total_duration()));
}

TEST_CASE("integrator configuration is validated") {
  IntegratorConfig cfg;
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = IntegratorConfig{};
  cfg.batch_size = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = IntegratorConfig{};
  cfg.dt = 0.01;  // far too coarse for 2.3 GHz detunings
  const Schedule sched = build_schedule(GateKind::CPHASE_11, GateParams{});
  CHECK_THROWS(cfg.validate_for(sched));
}

TEST_CASE("non-Hermitian initial state is rejected") {
  const SystemSpec s = spec(0.0, QutritSpec{});
  const SpaceLayout layout = s.layout();
  DensityMatrix rho = basis(layout, {0, 0, 0});
  rho.matrix(0, 1) = 0.3;
  CHECK_THROWS_AS(propagate_schedule(rho, s, Schedule{{ge_a_step(s, M_PI)}}, IntegratorConfig{}), UsageError);
}
