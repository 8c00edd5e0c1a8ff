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

// Angle-averaged gate fidelity, channel reconstruction, parameter sweeps and
// density-matrix dumps.

#ifndef ALLRES_EXPERIMENTS_HPP
#define ALLRES_EXPERIMENTS_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "allres/dynamics.hpp"
#include "allres/protocols.hpp"

namespace allres {

/// Uniform grid of M nodes per angle on [0, 2 pi). The integrand is a
/// trigonometric polynomial of degree <= 4 in each angle, so M >= 5 is exact.
struct QuadratureSpec {
  int nodes_per_angle = 8;

  void validate() const;
  std::vector<double> nodes() const;
};

/// Every point of the M^n grid, last angle fastest.
std::vector<std::vector<double>> quadrature_grid(int num_angles, const QuadratureSpec& quad);

struct ExecutionConfig {
  IntegratorConfig integrator;
  /// Worker threads; results do not depend on it.
  int jobs = 1;

  void validate() const;
};

/// Runs fn(i) for i in [0, count) on up to `jobs` threads, each owning a
/// contiguous range. fn must only write to slot i of its outputs.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

/// Worst case of the boundary diagnostics of one step over many propagations.
struct StepEnvelope {
  std::string label;
  double t_start = 0.0;
  double t_end = 0.0;
  int substeps = 0;
  double max_trace_error = 0.0;
  double max_hermiticity_drift = 0.0;
  double min_eigenvalue = 0.0;
  double max_excitation_drift = 0.0;
};

struct AveragedFidelity {
  GateKind kind = GateKind::CPHASE_11;
  double fidelity = 0.0;
  double min_fidelity = 0.0;  // over the grid
  double max_fidelity = 0.0;
  double total_duration = 0.0;
  int propagations = 0;
  std::vector<StepEnvelope> steps;
};

/// Mean of <psi_ideal(theta)| rho_f(theta) |psi_ideal(theta)> over the grid,
/// one propagation per grid point.
AveragedFidelity average_fidelity_direct(GateKind kind, const GateParams& params, const QuadratureSpec& quad,
                                         const ExecutionConfig& exec);

/// Linear map on operators of the computational subspace (qutrit in |g>).
struct ProcessMatrix {
  GateKind kind = GateKind::CPHASE_11;
  int dim = 0;                  // 2^n
  std::vector<CMatrix> images;  // image of |j><k| at j * dim + k, projected on the block
  CMatrix leakage;              // trace of the image of |j><k| outside the block
  double total_duration = 0.0;
  int propagations = 0;
  std::vector<StepEnvelope> steps;

  const CMatrix& image(int j, int k) const { return images.at(static_cast<std::size_t>(j * dim + k)); }
};

/// Propagates dim^2 physical inputs (|j><j|, |+_jk><+_jk|, |+i_jk><+i_jk|) and
/// recombines them into the images of every |j><k|.
ProcessMatrix reconstruct_channel(GateKind kind, const GateParams& params, const ExecutionConfig& exec);

/// rho -> U rho U^dagger on the computational subspace (no leakage).
ProcessMatrix unitary_channel(GateKind kind, const CMatrix& u);

/// Image of an operator given on the computational subspace.
CMatrix apply_channel(const ProcessMatrix& channel, const CMatrix& rho_block);

/// The fidelity integrand as a quadratic form in the channel entries.
/// Throws UsageError if the channel was built for another gate kind.
double average_fidelity_channel(const ProcessMatrix& channel, GateKind kind, const QuadratureSpec& quad);

enum class SweepParameter { Kappa, Gamma, Anharmonicity, GMin };

std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view name);
/// Unit of the grid values: 1/ns for kappa and gamma, MHz for the others.
std::string_view sweep_unit(SweepParameter p);

/// `value` in sweep units. kappa sets every resonator's decay rate; gamma sets
/// gamma_ge and scales gamma_ef, gamma_phi_e, gamma_phi_f by the same factor.
GateParams apply_sweep_value(const GateParams& baseline, SweepParameter p, double value);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::Kappa;
  std::vector<double> values;
  GateParams baseline;

  void validate() const;
};

/// n evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int n);

struct SweepPoint {
  double value = 0.0;
  double fidelity = 0.0;
};

struct SweepResult {
  SweepParameter parameter = SweepParameter::Kappa;
  GateKind kind = GateKind::CPHASE_11;
  std::vector<SweepPoint> points;

  /// Fidelity never increases as the value increases (values taken in grid order).
  bool non_increasing() const;
  bool strictly_increasing() const;
  bool strictly_decreasing() const;
};

SweepResult sweep(GateKind kind, const SweepSpec& spec, const QuadratureSpec& quad, const ExecutionConfig& exec);

struct DensityReport {
  GateKind kind = GateKind::CPHASE_11;
  std::vector<double> thetas;
  double fidelity = 0.0;
  double total_duration = 0.0;
  CMatrix initial_block;  // resonators after tracing out the qutrit, computational states only
  CMatrix final_block;
  std::optional<DensityMatrix> initial_full;
  std::optional<DensityMatrix> final_full;
};

/// Computational block of Tr_qutrit(rho), in computational order.
CMatrix resonator_block(const DensityMatrix& rho);

DensityReport density_report(GateKind kind, const GateParams& params, std::span<const double> thetas,
                             const IntegratorConfig& cfg, bool full_space = false);

}  // namespace allres

#endif  // ALLRES_EXPERIMENTS_HPP
