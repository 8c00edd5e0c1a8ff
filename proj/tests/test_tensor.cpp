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

#include "allres/tensor.hpp"

using namespace allres;

TEST_CASE("kron places blocks in row-major factor order") {
  Eigen::Matrix2cd a;
  a << 1.0, 2.0, 3.0, 4.0;
  Eigen::Matrix2cd b;
  b << 0.0, 1.0, 1.0, 0.0;
  const CMatrix k = kron(a, b);
  REQUIRE(k.rows() == 4);
  CHECK(k(0, 1) == Complex(1.0));
  CHECK(k(1, 0) == Complex(1.0));
  CHECK(k(0, 3) == Complex(2.0));
  CHECK(k(3, 2) == Complex(4.0));
  CHECK(k(0, 0) == Complex(0.0));
}

TEST_CASE("embed equals explicit Kronecker product with identities") {
  const SpaceLayout layout({3, 2, 4});
  CMatrix local = CMatrix::Random(2, 2);
  const Operator op = embed(local, 1, layout);
  const CMatrix expected = kron(kron(CMatrix::Identity(3, 3), local), CMatrix::Identity(4, 4));
  CHECK((op.matrix - expected).norm() < 1e-14);
  CHECK_THROWS_AS(embed(local, 0, layout), ConfigError);
  CHECK_THROWS_AS(embed(local, 3, layout), ConfigError);
}

TEST_CASE("flat and multi indices round-trip with factor 0 most significant") {
  const SpaceLayout layout = SpaceLayout::qutrit_with_resonators(2, 3);
  CHECK(layout.total_dim() == 27);
  CHECK(layout.is_qutrit_layout());
  CHECK(layout.stride(0) == 9);
  for (int i = 0; i < layout.total_dim(); ++i) {
    const std::vector<int> m = layout.multi_index(i);
    CHECK(layout.flat_index(m) == i);
    CHECK(layout.digit(i, 0) == m[0]);
  }
  const std::vector<int> e10 = {1, 1, 0};
  CHECK(layout.flat_index(e10) == 9 + 3);
}

TEST_CASE("partial trace of a product state returns the factor state") {
  const SpaceLayout layout({2, 3});
  CVector a(2);
  a << 0.6, Complex(0.0, 0.8);
  CVector b(3);
  b << 1.0, 0.0, 0.0;
  const CVector psi = kron(CMatrix(a), CMatrix(b));
  const DensityMatrix rho = to_density(StateVector{layout, psi});
  const std::vector<int> keep = {0};
  const DensityMatrix ra = partial_trace(rho, keep);
  CHECK((ra.matrix - a * a.adjoint()).norm() < 1e-14);
}

TEST_CASE("physicality report of a pure state") {
  const SpaceLayout layout({2, 2});
  const std::vector<int> m = {1, 0};
  const DensityMatrix rho = to_density(basis_state(layout, m));
  const PhysicalityReport r = check_physicality(rho);
  CHECK(r.trace_error < 1e-15);
  CHECK(r.hermiticity_error == 0.0);
  CHECK(r.min_eigenvalue > -1e-15);
  CMatrix bad = rho.matrix;
  bad(0, 1) = 0.1;
  CHECK(hermiticity_error(bad) == doctest::Approx(0.1));
}

TEST_CASE("expectation of the identity is the norm") {
  const SpaceLayout layout({3, 3});
  CVector psi = CVector::Random(9);
  psi.normalize();
  const StateVector s{layout, psi};
  CHECK(std::abs(expectation(s, identity(layout)) - 1.0) < 1e-14);
  CHECK(std::abs(expectation(to_density(s), identity(layout)) - 1.0) < 1e-14);
}
