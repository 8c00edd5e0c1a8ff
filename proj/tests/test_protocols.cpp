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

#include "allres/protocols.hpp"

using namespace allres;

TEST_CASE("gate kind names round-trip") {
  for (GateKind k : kAllGateKinds) CHECK(parse_gate_kind(to_string(k)) == k);
  CHECK(parse_gate_kind("cphase") == GateKind::CPHASE_11);
  CHECK_THROWS_AS(parse_gate_kind("toffoli"), UsageError);
  CHECK(num_resonators(GateKind::CCPHASE) == 3);
  CHECK(parse_table2_mode("listed") == Table2Mode::Listed);
}

TEST_CASE("c-phase schedule duration") {
  const Schedule s = build_schedule(GateKind::CPHASE_11, GateParams{});
  REQUIRE(s.steps.size() == 3);
  // steps i + iii: 2 pi total area at 45 MHz; step ii: pi at sqrt2 * 22 MHz
  const double expected = 2.0 / (2.0 * 0.045) + 1.0 / (2.0 * std::sqrt(2.0) * 0.022);
  CHECK(s.total_duration() == doctest::Approx(expected).epsilon(1e-12));
  CHECK(s.total_duration() == doctest::Approx(38.2928).epsilon(1e-5));
  CHECK(s.steps[0].omega_ge == doctest::Approx(ghz(5.5)));
  CHECK(s.steps[1].omega_ge == doctest::Approx(ghz(7.8)));
}

TEST_CASE("cc-phase schedule: qutrit frequencies follow the table") {
  const Schedule s = build_schedule(GateKind::CCPHASE, GateParams{});
  REQUIRE(s.steps.size() == 9);
  const double table[] = {5.5, 7.8, 5.5, 6.3, 8.8, 6.3, 5.5, 7.8, 5.5};
  for (int i = 0; i < 9; ++i) CHECK(s.steps[i].omega_ge / kTwoPi == doctest::Approx(table[i]));
  CHECK(s.total_duration() == doctest::Approx(73.3956).epsilon(1e-5));
}

TEST_CASE("cc-phase listed mode: step v lasts 1/(2 * 20 MHz)") {
  GateParams p;
  p.table2_mode = Table2Mode::Listed;
  const Schedule s = build_schedule(GateKind::CCPHASE, p);
  CHECK(s.steps[4].duration == doctest::Approx(25.0));
  CHECK(s.steps[4].addressed.resonator == 2);
  CHECK(s.steps[4].addressed.transition == Transition::EF);
  CHECK(s.total_duration() == doctest::Approx(91.524).epsilon(1e-5));
}

TEST_CASE("ideal unitaries") {
  CMatrix u = ideal_unitary(GateKind::CPHASE_11);
  CHECK(u(3, 3) == Complex(-1.0));
  CHECK(u(2, 2) == Complex(1.0));
  u = ideal_unitary(GateKind::CPHASE_10);
  CHECK(u(2, 2) == Complex(-1.0));
  u = ideal_unitary(GateKind::CCPHASE);
  CHECK(u.rows() == 8);
  CHECK(u(6, 6) == Complex(-1.0));
  CHECK(u(7, 7) == Complex(1.0));
  u = ideal_unitary(GateKind::SWAP);
  CHECK(std::abs(u(1, 2)) == 1.0);
  CHECK(std::abs(u(2, 1)) == 1.0);
}

TEST_CASE("product amplitudes") {
  const std::vector<double> th = {0.3, 0.9};
  const RVector b = product_amplitudes(th);
  CHECK(b(0) == doctest::Approx(std::cos(0.3) * std::cos(0.9)));
  CHECK(b(1) == doctest::Approx(std::cos(0.3) * std::sin(0.9)));
  CHECK(b(2) == doctest::Approx(std::sin(0.3) * std::cos(0.9)));
  CHECK(b.norm() == doctest::Approx(1.0));
}

TEST_CASE("unitary limit reaches the ideal gate for every kind") {
  const GateParams p = GateParams{}.unitary_limit();
  CHECK(!p.has_decoherence(GateKind::CPHASE_11));
  for (GateKind k : kAllGateKinds) {
    std::vector<double> th(static_cast<std::size_t>(num_resonators(k)), 0.0);
    for (std::size_t i = 0; i < th.size(); ++i) th[i] = 0.35 + 0.3 * double(i);
    const GateReport r = run_gate(k, p, th, IntegratorConfig{});
    CHECK(r.fidelity > 1.0 - 1e-6);
  }
}

TEST_CASE("decoherence lowers the single-state fidelity of c-phase") {
  const std::vector<double> th = {M_PI / 4, M_PI / 4};
  const GateReport r = run_gate(GateKind::CPHASE_11, GateParams{}, th, IntegratorConfig{});
  CHECK(r.fidelity < 0.999);
  CHECK(r.fidelity > 0.99);
  CHECK(r.total_duration == doctest::Approx(38.2928).epsilon(1e-5));
}

TEST_CASE("wrong number of angles is a usage error") {
  const std::vector<double> th = {0.1};
  CHECK_THROWS_AS(run_gate(GateKind::CPHASE_11, GateParams{}, th, IntegratorConfig{}), UsageError);
}

TEST_CASE("injected step-2 fault changes the c-phase state") {
  GateParams p = GateParams{}.unitary_limit();
  p.fault = ScheduleFault::Step2Area;
  const std::vector<double> th = {0.6, 0.8};
  CHECK(run_gate(GateKind::CPHASE_11, p, th, IntegratorConfig{}).fidelity < 0.99);
}
