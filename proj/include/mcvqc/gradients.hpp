// Copyright 2026 The mcvqc Authors
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

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mcvqc/backend.hpp"
#include "mcvqc/circuit.hpp"

namespace mcvqc {

class EnsembleModel;
struct ForwardResult;

enum class GradMethod {
    /// Shifted circuit evaluations; works on every backend.
    ParameterShift,
    /// Reverse-mode sweep over the statevector; ideal backend only. Computes
    /// the same derivative as the shift rules in O(gates) instead of
    /// O(gates^2).
    Adjoint,
};

/// Derivative of <Z_obs> with respect to one parameter slot of `source`,
/// summed over every gate occurrence bound to that slot. CRX occurrences use
/// the four-term rule since their generator has eigenvalues {0, +-1/2}; all
/// other gates use the two-term rule with shift pi/2.
double param_shift(const CircuitSpec& circuit, std::span<const double> enc,
                   std::span<const double> theta, int slot, const Backend& backend = Backend::ideal(),
                   ParamSource source = ParamSource::Trainable);

/// (f(x + h e_slot) - f(x - h e_slot)) / 2h.
double finite_diff_oracle(const std::function<double(std::span<const double>)>& f,
                          std::span<const double> x, int slot, double h);

struct CircuitGradient {
    double value = 0.0;
    std::vector<double> d_enc;
    std::vector<double> d_theta;
};

CircuitGradient circuit_gradient(const CircuitSpec& circuit, std::span<const double> enc,
                                 std::span<const double> theta, GradMethod method,
                                 const Backend& backend = Backend::ideal());

struct GradientOptions {
    GradMethod method = GradMethod::Adjoint;
    Backend backend = Backend::ideal();
};

/// Gradient of a downstream loss with respect to every model parameter, in
/// the layout of EnsembleModel::parameters(). `loss_grad` is dL/d(final
/// output) for the sample cached in `forward`.
std::vector<double> hybrid_backward(const EnsembleModel& model, const ForwardResult& forward,
                                    std::span<const double> loss_grad,
                                    const GradientOptions& options = {});

}  // namespace mcvqc
