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

#ifndef ALLRES_TENSOR_HPP
#define ALLRES_TENSOR_HPP

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace allres {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Invalid physical or numerical configuration (bad dimensions, negative rates, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller misuse: mismatched layouts, wrong argument counts, empty selections.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical invariant (trace, Hermiticity, positivity, ...) was violated during a run.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered tensor factors of a Hilbert space. Factor 0 is the most significant
/// digit of the flat index, so flat indices follow Kronecker-product order.
///
/// The simulator itself always uses a qutrit-first layout (see
/// `qutrit_with_resonators`); general layouts appear as results of partial traces.
class SpaceLayout {
 public:
  SpaceLayout() = default;
  explicit SpaceLayout(std::vector<int> factor_dims);

  /// (qutrit, r_a, r_b, ...) with `num_resonators` modes truncated at `fock_cutoff` levels.
  static SpaceLayout qutrit_with_resonators(int num_resonators, int fock_cutoff);

  int num_factors() const { return static_cast<int>(dims_.size()); }
  int dim(int factor) const { return dims_.at(static_cast<std::size_t>(factor)); }
  int total_dim() const { return total_; }
  const std::vector<int>& factor_dims() const { return dims_; }

  /// True when factor 0 is a qutrit and every other factor a resonator (dim >= 2).
  bool is_qutrit_layout() const;
  int num_resonators() const { return num_factors() - 1; }

  std::vector<int> multi_index(int flat) const;
  int flat_index(std::span<const int> multi) const;
  /// Digit of `flat` for one factor, without materializing the whole multi-index.
  int digit(int flat, int factor) const { return (flat / strides_[static_cast<std::size_t>(factor)]) % dims_[static_cast<std::size_t>(factor)]; }
  int stride(int factor) const { return strides_.at(static_cast<std::size_t>(factor)); }

  friend bool operator==(const SpaceLayout& a, const SpaceLayout& b) { return a.dims_ == b.dims_; }

 private:
  std::vector<int> dims_;
  std::vector<int> strides_;
  int total_ = 0;
};

struct Operator {
  SpaceLayout layout;
  CMatrix matrix;
};

struct StateVector {
  SpaceLayout layout;
  CVector amplitudes;
};

struct DensityMatrix {
  SpaceLayout layout;
  CMatrix matrix;
};

/// Kronecker product of two dense matrices.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// I ⊗ ... ⊗ local ⊗ ... ⊗ I with `local` acting on `factor`.
template <typename Derived>
Operator embed(const Eigen::MatrixBase<Derived>& local, int factor, const SpaceLayout& layout) {
  if (factor < 0 || factor >= layout.num_factors()) {
    throw ConfigError("embed: factor index " + std::to_string(factor) + " out of range");
  }
  const int d = layout.dim(factor);
  if (local.rows() != d || local.cols() != d) {
    throw ConfigError("embed: local operator is " + std::to_string(local.rows()) + "x" +
                      std::to_string(local.cols()) + " but factor " + std::to_string(factor) +
                      " has dimension " + std::to_string(d));
  }
  const int right = layout.stride(factor);
  const int left = layout.total_dim() / (d * right);
  CMatrix m = CMatrix::Zero(layout.total_dim(), layout.total_dim());
  for (int l = 0; l < left; ++l) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const Complex v = local(i, j);
        if (v == Complex(0.0)) continue;
        const int row0 = (l * d + i) * right;
        const int col0 = (l * d + j) * right;
        for (int r = 0; r < right; ++r) m(row0 + r, col0 + r) = v;
      }
    }
  }
  return Operator{layout, std::move(m)};
}

Operator identity(const SpaceLayout& layout);
Operator zero_operator(const SpaceLayout& layout);
Operator operator*(const Operator& a, const Operator& b);
Operator operator+(const Operator& a, const Operator& b);
Operator operator*(Complex s, const Operator& a);
Operator adjoint(const Operator& a);

/// Basis ket for a multi-index in layout order.
StateVector basis_state(const SpaceLayout& layout, std::span<const int> multi);
StateVector apply(const Operator& op, const StateVector& psi);
DensityMatrix to_density(const StateVector& psi);

/// Traces out every factor not in `keep`; the result's layout lists the kept
/// factors in their original order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// Tr(rho * op).
Complex expectation(const DensityMatrix& rho, const Operator& op);
Complex expectation(const StateVector& psi, const Operator& op);

struct PhysicalityReport {
  double trace_error = 0.0;        // |Tr rho - 1|
  double hermiticity_error = 0.0;  // max |rho - rho^dagger|
  double min_eigenvalue = 0.0;
};

PhysicalityReport check_physicality(const CMatrix& rho);
inline PhysicalityReport check_physicality(const DensityMatrix& rho) { return check_physicality(rho.matrix); }

/// Entrywise max |a - a^dagger|.
double hermiticity_error(const CMatrix& a);

}  // namespace allres

#endif  // ALLRES_TENSOR_HPP
