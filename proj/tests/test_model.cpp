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

#include "allres/model.hpp"

using namespace allres;

namespace {

SystemSpec two_resonators() {
  SystemSpec s;
  s.qutrit = QutritSpec{per_us(50.0), per_us(25.0), per_us(50.0), per_us(50.0), ghz(0.8)};
  s.resonators = {ResonatorSpec{ghz(5.5), per_us(50.0), 3}, ResonatorSpec{ghz(7.0), per_us(50.0), 3}};
  return s;
}

}  // namespace

TEST_CASE("annihilation operator has sqrt(n) on the superdiagonal") {
  const CMatrix a = annihilation(4);
  for (int n = 1; n < 4; ++n) CHECK(a(n - 1, n).real() == doctest::Approx(std::sqrt(double(n))));
  CHECK(a.diagonal().norm() == 0.0);
}

TEST_CASE("qutrit raising operators address the right levels") {
  const CMatrix ge = qutrit_raising(Transition::GE);
  const CMatrix ef = qutrit_raising(Transition::EF);
  CHECK(ge(1, 0) == Complex(1.0));
  CHECK(ef(2, 1) == Complex(1.0));
  CHECK(ge.cwiseAbs().sum() == 1.0);
  CHECK(ef.cwiseAbs().sum() == 1.0);
}

TEST_CASE("GE-resonant step: frequency, detunings and duration") {
  const SystemSpec sys = two_resonators();
  const PulseStep s = make_pulse_step(sys, {0, Transition::GE}, M_PI, {mhz(45.0), mhz(0.5)},
                                      {std::sqrt(2.0) * mhz(45.0), std::sqrt(2.0) * mhz(0.5)});
  CHECK(s.omega_ge == doctest::Approx(ghz(5.5)));
  // pi / (2 pi 45 MHz) = 1 / 0.09 ns
  CHECK(s.duration == doctest::Approx(1.0 / 0.09));
  CHECK(s.detuning(0, Transition::GE) == doctest::Approx(0.0));
  CHECK(s.detuning(0, Transition::EF) == doctest::Approx(-ghz(0.8)));
  CHECK(s.detuning(1, Transition::GE) == doctest::Approx(ghz(5.5 - 7.0)));
  CHECK(s.max_abs_detuning() == doctest::Approx(ghz(2.3)));
}

TEST_CASE("EF-resonant step sits one anharmonicity above the resonator") {
  const SystemSpec sys = two_resonators();
  const PulseStep s = make_pulse_step(sys, {1, Transition::EF}, M_PI, {mhz(0.5), mhz(22.0)},
                                      {mhz(0.5) * std::sqrt(2.0), mhz(22.0) * std::sqrt(2.0)});
  CHECK(s.omega_ge == doctest::Approx(ghz(7.8)));
  CHECK(s.detuning(1, Transition::EF) == doctest::Approx(0.0));
  CHECK(s.duration == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0) * 0.022)));
}

TEST_CASE("unsatisfiable resonance is rejected") {
  const SystemSpec sys = two_resonators();
  CHECK_THROWS_AS(make_pulse_step(sys, {0, Transition::GE}, M_PI, {0.0, 0.0}, {0.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(make_pulse_step(sys, {2, Transition::GE}, M_PI, {1.0, 1.0}, {1.0, 1.0}), ConfigError);
  SystemSpec neg = sys;
  neg.qutrit.anharmonicity = ghz(6.0);
  CHECK_THROWS_AS(make_pulse_step(neg, {0, Transition::GE}, M_PI, {1.0, 1.0}, {1.0, 1.0}), ConfigError);
}

TEST_CASE("literal phases are detuning times gate time") {
  const SystemSpec sys = two_resonators();
  const PulseStep s = make_pulse_step(sys, {0, Transition::GE}, M_PI, {mhz(45.0), mhz(0.5)},
                                      {mhz(63.0), mhz(0.7)});
  const PhaseAccumulators p = literal_phases(s, 0.5);
  // detuning of r_b GE is -2 pi 1.5 GHz; 0.5 ns gives -2 pi 0.75
  CHECK(p.phase(1, Transition::GE) == doctest::Approx(-kTwoPi * 0.75));
  CHECK(p.phase(0, Transition::GE) == 0.0);
  const PhaseAccumulators q = advance_phases(PhaseAccumulators(2), s, 0.5);
  CHECK(q == p);
}

TEST_CASE("interaction Hamiltonian is Hermitian and excitation-conserving") {
  const SystemSpec sys = two_resonators();
  const SpaceLayout layout = sys.layout();
  const PulseStep s = make_pulse_step(sys, {1, Transition::EF}, M_PI, {mhz(0.5), mhz(22.0)},
                                      {mhz(0.7), mhz(31.1)});
  const Operator h = interaction_hamiltonian(layout, s, literal_phases(s, 3.0), 1.234);
  CHECK((h.matrix - h.matrix.adjoint()).norm() < 1e-12);
  const Operator n = excitation_number(layout);
  CHECK((h.matrix * n.matrix - n.matrix * h.matrix).norm() < 1e-9);
}

TEST_CASE("collapse operators: five channels per qutrit plus one per resonator, diagonal sum") {
  const SystemSpec sys = two_resonators();
  const SpaceLayout layout = sys.layout();
  const std::vector<Operator> c = collapse_operators(sys, layout);
  CHECK(c.size() == 6);
  CMatrix k = CMatrix::Zero(layout.total_dim(), layout.total_dim());
  for (const Operator& op : c) k += op.matrix.adjoint() * op.matrix;
  CMatrix off = k;
  off.diagonal().setZero();
  CHECK(off.norm() < 1e-15);
  // |1, 0, g>: only r_a decays
  const std::vector<int> m = {0, 1, 0};
  CHECK(k(layout.flat_index(m), layout.flat_index(m)).real() == doctest::Approx(per_us(50.0)));
}

TEST_CASE("zero rates give no collapse operators") {
  SystemSpec sys = two_resonators();
  sys.qutrit = QutritSpec{};
  for (auto& r : sys.resonators) r.kappa = 0.0;
  CHECK(collapse_operators(sys, sys.layout()).empty());
}

TEST_CASE("invalid specs are rejected") {
  SystemSpec sys = two_resonators();
  sys.resonators[0].fock_cutoff = 1;
  CHECK_THROWS_AS(sys.validate(), ConfigError);
  sys = two_resonators();
  sys.qutrit.gamma_ge = -1.0;
  CHECK_THROWS_AS(sys.validate(), ConfigError);
}
