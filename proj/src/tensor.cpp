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

#include "allres/tensor.hpp"

#include <algorithm>

namespace allres {

SpaceLayout::SpaceLayout(std::vector<int> factor_dims) : dims_(std::move(factor_dims)) {
  if (dims_.empty()) throw ConfigError("SpaceLayout: at least one factor required");
  strides_.assign(dims_.size(), 1);
  long long total = 1;
  for (std::size_t f = dims_.size(); f-- > 0;) {
    if (dims_[f] <= 0) throw ConfigError("SpaceLayout: factor dimensions must be positive");
    strides_[f] = static_cast<int>(total);
    total *= dims_[f];
    if (total > (1 << 20)) throw ConfigError("SpaceLayout: total dimension too large for dense storage");
  }
  total_ = static_cast<int>(total);
}

SpaceLayout SpaceLayout::qutrit_with_resonators(int num_resonators, int fock_cutoff) {
  if (num_resonators < 1) throw ConfigError("at least one resonator required");
  if (fock_cutoff < 2) throw ConfigError("fock_cutoff must be >= 2");
  std::vector<int> dims(static_cast<std::size_t>(num_resonators) + 1, fock_cutoff);
  dims[0] = 3;
  return SpaceLayout(std::move(dims));
}

bool SpaceLayout::is_qutrit_layout() const {
  if (dims_.size() < 2 || dims_[0] != 3) return false;
  return std::all_of(dims_.begin() + 1, dims_.end(), [](int d) { return d >= 2; });
}

std::vector<int> SpaceLayout::multi_index(int flat) const {
  if (flat < 0 || flat >= total_) throw UsageError("flat index out of range");
  std::vector<int> multi(dims_.size());
  for (std::size_t f = 0; f < dims_.size(); ++f) multi[f] = (flat / strides_[f]) % dims_[f];
  return multi;
}

int SpaceLayout::flat_index(std::span<const int> multi) const {
  if (multi.size() != dims_.size()) throw UsageError("multi-index has wrong number of factors");
  int flat = 0;
  for (std::size_t f = 0; f < dims_.size(); ++f) {
    if (multi[f] < 0 || multi[f] >= dims_[f]) throw UsageError("multi-index digit out of range");
    flat += multi[f] * strides_[f];
  }
  return flat;
}

Operator identity(const SpaceLayout& layout) {
  return Operator{layout, CMatrix::Identity(layout.total_dim(), layout.total_dim())};
}

Operator zero_operator(const SpaceLayout& layout) {
  return Operator{layout, CMatrix::Zero(layout.total_dim(), layout.total_dim())};
}

namespace {

void require_same(const SpaceLayout& a, const SpaceLayout& b, const char* what) {
  if (!(a == b)) throw UsageError(std::string(what) + ": layout mismatch");
}

}  // namespace

Operator operator*(const Operator& a, const Operator& b) {
  require_same(a.layout, b.layout, "operator product");
  return Operator{a.layout, a.matrix * b.matrix};
}

Operator operator+(const Operator& a, const Operator& b) {
  require_same(a.layout, b.layout, "operator sum");
  return Operator{a.layout, a.matrix + b.matrix};
}

Operator operator*(Complex s, const Operator& a) { return Operator{a.layout, s * a.matrix}; }

Operator adjoint(const Operator& a) { return Operator{a.layout, a.matrix.adjoint()}; }

StateVector basis_state(const SpaceLayout& layout, std::span<const int> multi) {
  CVector v = CVector::Zero(layout.total_dim());
  v(layout.flat_index(multi)) = 1.0;
  return StateVector{layout, std::move(v)};
}

StateVector apply(const Operator& op, const StateVector& psi) {
  require_same(op.layout, psi.layout, "apply");
  return StateVector{psi.layout, op.matrix * psi.amplitudes};
}

DensityMatrix to_density(const StateVector& psi) {
  return DensityMatrix{psi.layout, psi.amplitudes * psi.amplitudes.adjoint()};
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const SpaceLayout& layout = rho.layout;
  if (keep.empty()) throw UsageError("partial_trace: keep set is empty");
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw UsageError("partial_trace: duplicate factor in keep set");
  }
  if (kept.front() < 0 || kept.back() >= layout.num_factors()) {
    throw UsageError("partial_trace: factor index out of range");
  }
  if (static_cast<int>(kept.size()) == layout.num_factors()) return rho;

  std::vector<int> kept_dims;
  std::vector<bool> is_kept(static_cast<std::size_t>(layout.num_factors()), false);
  for (int f : kept) {
    kept_dims.push_back(layout.dim(f));
    is_kept[static_cast<std::size_t>(f)] = true;
  }
  SpaceLayout out_layout(kept_dims);

  // Split every flat index into (kept part, traced part).
  const int n = layout.total_dim();
  std::vector<int> kept_idx(static_cast<std::size_t>(n));
  std::vector<int> traced_idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    int k = 0;
    int t = 0;
    for (int f = 0; f < layout.num_factors(); ++f) {
      const int digit = layout.digit(i, f);
      if (is_kept[static_cast<std::size_t>(f)]) {
        k = k * layout.dim(f) + digit;
      } else {
        t = t * layout.dim(f) + digit;
      }
    }
    kept_idx[static_cast<std::size_t>(i)] = k;
    traced_idx[static_cast<std::size_t>(i)] = t;
  }

  CMatrix out = CMatrix::Zero(out_layout.total_dim(), out_layout.total_dim());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (traced_idx[static_cast<std::size_t>(i)] != traced_idx[static_cast<std::size_t>(j)]) continue;
      out(kept_idx[static_cast<std::size_t>(i)], kept_idx[static_cast<std::size_t>(j)]) += rho.matrix(i, j);
    }
  }
  return DensityMatrix{out_layout, std::move(out)};
}

Complex expectation(const DensityMatrix& rho, const Operator& op) {
  require_same(rho.layout, op.layout, "expectation");
  // Tr(rho op) = sum_ij rho_ij op_ji
  return (rho.matrix.array() * op.matrix.transpose().array()).sum();
}

Complex expectation(const StateVector& psi, const Operator& op) {
  require_same(psi.layout, op.layout, "expectation");
  return psi.amplitudes.dot(op.matrix * psi.amplitudes);
}

double hermiticity_error(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

PhysicalityReport check_physicality(const CMatrix& rho) {
  PhysicalityReport r;
  r.trace_error = std::abs(rho.trace() - Complex(1.0));
  r.hermiticity_error = hermiticity_error(rho);
  const CMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = solver.eigenvalues().minCoeff();
  return r;
}

}  // namespace allres
