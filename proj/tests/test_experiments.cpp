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

#include "allres/experiments.hpp"

using namespace allres;

TEST_CASE("quadrature nodes are uniform on [0, 2 pi)") {
  QuadratureSpec q;
  q.nodes_per_angle = 5;
  const std::vector<double> n = q.nodes();
  REQUIRE(n.size() == 5);
  CHECK(n[0] == 0.0);
  CHECK(n[1] == doctest::Approx(kTwoPi / 5));
  q.nodes_per_angle = 4;
  CHECK_THROWS_AS(q.validate(), ConfigError);
  CHECK(quadrature_grid(3, QuadratureSpec{}).size() == 512);
}

TEST_CASE("identity channel averages to 9/16 against c-phase") {
  // mean over the angles of (1 - 2 sin^2 t1 sin^2 t2)^2
  const ProcessMatrix id = unitary_channel(GateKind::CPHASE_11, CMatrix::Identity(4, 4));
  CHECK(average_fidelity_channel(id, GateKind::CPHASE_11, QuadratureSpec{}) == doctest::Approx(9.0 / 16.0));
}

TEST_CASE("identity channel against SWAP: brute-force grid oracle") {
  const ProcessMatrix id = unitary_channel(GateKind::SWAP, CMatrix::Identity(4, 4));
  const CMatrix u = ideal_unitary(GateKind::SWAP);
  const int m = 64;
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const std::vector<double> th = {kTwoPi * i / m, kTwoPi * j / m};
      const CVector c = product_amplitudes(th).cast<Complex>();
      sum += std::norm(c.dot(u * c));
    }
  }
  CHECK(average_fidelity_channel(id, GateKind::SWAP, QuadratureSpec{}) == doctest::Approx(sum / (m * m)));
  CHECK(sum / (m * m) == doctest::Approx(0.375));
}

TEST_CASE("ideal channels have unit fidelity and exact quadrature") {
  for (GateKind k : kAllGateKinds) {
    const ProcessMatrix ch = unitary_channel(k, ideal_unitary(k));
    for (int m : {5, 8, 16}) {
      QuadratureSpec q;
      q.nodes_per_angle = m;
      CHECK(average_fidelity_channel(ch, k, q) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  const ProcessMatrix ch = unitary_channel(GateKind::CPHASE_11, ideal_unitary(GateKind::CPHASE_11));
  CHECK_THROWS_AS(average_fidelity_channel(ch, GateKind::SWAP, QuadratureSpec{}), UsageError);
}

TEST_CASE("reconstructed c-phase channel") {
  const GateParams p;
  const ExecutionConfig exec;
  const ProcessMatrix ch = reconstruct_channel(GateKind::CPHASE_11, p, exec);
  REQUIRE(ch.dim == 4);
  CHECK(ch.total_duration == doctest::Approx(38.2928).epsilon(1e-5));

  SUBCASE("trace deficit equals leakage") {
    for (int j = 0; j < 4; ++j) {
      const double deficit = 1.0 - ch.image(j, j).trace().real();
      CHECK(std::abs(deficit - ch.leakage(j, j).real()) < 1e-12);
      CHECK(ch.leakage(j, j).real() >= -1e-12);
    }
  }

  SUBCASE("Hermiticity: image of |k><j| is the adjoint of image of |j><k|") {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) CHECK((ch.image(k, j) - ch.image(j, k).adjoint()).norm() < 1e-12);
    }
  }

  SUBCASE("linearity: channel applied to a pure input equals direct propagation") {
    const std::vector<double> th = {0.45, 1.25};
    const GateReport r = run_gate(GateKind::CPHASE_11, p, th, exec.integrator);
    const std::vector<int> idx = computational_indices(r.final_state.layout);
    CMatrix direct(4, 4);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) direct(a, b) = r.final_state.matrix(idx[a], idx[b]);
    }
    const CVector c = product_amplitudes(th).cast<Complex>();
    const CMatrix viaChannel = apply_channel(ch, c * c.adjoint());
    CHECK((viaChannel - direct).norm() < 1e-12);
  }

  SUBCASE("averaged fidelity and direct quadrature agree") {
    const double f = average_fidelity_channel(ch, GateKind::CPHASE_11, QuadratureSpec{});
    QuadratureSpec q5;
    q5.nodes_per_angle = 5;
    const AveragedFidelity d = average_fidelity_direct(GateKind::CPHASE_11, p, q5, exec);
    CHECK(std::abs(f - d.fidelity) < 1e-9);
    CHECK(d.propagations == 25);
    CHECK(d.min_fidelity <= d.fidelity);
    CHECK(d.max_fidelity >= d.fidelity);
    CHECK(d.steps.size() == 3);
  }
}

TEST_CASE("parallel execution gives identical results") {
  const GateParams p;
  ExecutionConfig one;
  ExecutionConfig two;
  two.jobs = 2;
  const ProcessMatrix a = reconstruct_channel(GateKind::CPHASE_10, p, one);
  const ProcessMatrix b = reconstruct_channel(GateKind::CPHASE_10, p, two);
  for (std::size_t i = 0; i < a.images.size(); ++i) CHECK(a.images[i] == b.images[i]);
}

TEST_CASE("parallel_for rethrows worker exceptions") {
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [](std::size_t i) {
                                 if (i == 7) throw InvariantError("boom");
                               }),
                  InvariantError);
}

TEST_CASE("sweep parameters") {
  const GateParams base;
  CHECK(parse_sweep_parameter("gmin") == SweepParameter::GMin);
  CHECK_THROWS_AS(parse_sweep_parameter("omega"), UsageError);
  GateParams p = apply_sweep_value(base, SweepParameter::Kappa, 0.002);
  for (double k : p.kappa) CHECK(k == 0.002);
  p = apply_sweep_value(base, SweepParameter::Gamma, 2.0 * base.qutrit.gamma_ge);
  CHECK(p.qutrit.gamma_ef == doctest::Approx(2.0 * base.qutrit.gamma_ef));
  CHECK(p.qutrit.gamma_phi_f == doctest::Approx(2.0 * base.qutrit.gamma_phi_f));
  p = apply_sweep_value(base, SweepParameter::Anharmonicity, 300.0);
  CHECK(p.qutrit.anharmonicity == doctest::Approx(ghz(0.3)));
  p = apply_sweep_value(base, SweepParameter::GMin, 2.0);
  CHECK(p.g_min == doctest::Approx(mhz(2.0)));
  CHECK(sweep_unit(SweepParameter::Anharmonicity) == "MHz");
  SweepSpec empty;
  CHECK_THROWS_AS(empty.validate(), UsageError);
  CHECK_THROWS_AS(linspace(0.0, 1.0, 0), UsageError);
  const std::vector<double> l = linspace(1.0, 2.0, 3);
  CHECK(l[1] == doctest::Approx(1.5));
  CHECK(linspace(4.0, 9.0, 1) == std::vector<double>{4.0});
}

TEST_CASE("sweep result trend predicates") {
  SweepResult r;
  r.points = {{0.0, 0.99}, {1.0, 0.98}, {2.0, 0.98}};
  CHECK(r.non_increasing());
  CHECK(!r.strictly_decreasing());
  CHECK(!r.strictly_increasing());
  r.points[2].fidelity = 0.97;
  CHECK(r.strictly_decreasing());
}

TEST_CASE("density report: resonator block of the final state") {
  const std::vector<double> th = {M_PI / 4, M_PI / 4};
  const DensityReport d = density_report(GateKind::CPHASE_11, GateParams{}.unitary_limit(), th, IntegratorConfig{}, true);
  REQUIRE(d.final_block.rows() == 4);
  CHECK(d.initial_block(0, 3).real() == doctest::Approx(0.25));
  CHECK(d.final_block(0, 3).real() == doctest::Approx(-0.25).epsilon(1e-6));
  CHECK(d.final_full.has_value());
  CHECK(d.fidelity > 1.0 - 1e-6);
}
