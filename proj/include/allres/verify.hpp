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

// Built-in oracle suite: closed-form resonance processes, printed step states
// of every gate, quadrature exactness and dual-path agreement.

#ifndef ALLRES_VERIFY_HPP
#define ALLRES_VERIFY_HPP

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "allres/experiments.hpp"
#include "allres/protocols.hpp"

namespace allres {

struct CheckResult {
  std::string name;
  bool passed = false;
  double error = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyOptions {
  /// Skip the cc-phase channel reconstruction and direct quadrature.
  bool quick = false;
  /// Corrupt the gate schedules (mutation check of the suite itself).
  ScheduleFault fault = ScheduleFault::None;
  ExecutionConfig exec;
};

/// One term beta_k * coeff |ket> of a printed state; ket lists the resonator
/// photon numbers (r_a first) followed by the qutrit level, e.g. "010e".
struct StateTerm {
  int beta = 1;  // 1-based index into the product amplitudes
  std::complex<double> coeff;
  const char* ket = "";
};

struct PrintedState {
  GateKind kind;
  int after_step;  // 1-based
  std::vector<StateTerm> terms;
};

/// The intermediate and final states printed for the c-phase, its variant and
/// the cc-phase gate.
const std::vector<PrintedState>& printed_states();

/// Sum of beta_k coeff |ket> with beta = product_amplitudes(thetas).
CVector printed_state_vector(const PrintedState& state, std::span<const double> thetas, const SpaceLayout& layout);

/// Product of closed-form resonant propagators of the first `steps` steps.
Operator compose_resonant(const Schedule& schedule, const SpaceLayout& layout, int steps);

/// Runs every check; `on_result` sees each result as soon as it is known.
std::vector<CheckResult> run_verify(const VerifyOptions& options,
                                    const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace allres

#endif  // ALLRES_VERIFY_HPP
