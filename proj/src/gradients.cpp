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

#include "mcvqc/gradients.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mcvqc/error.hpp"

namespace mcvqc {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

// Four-term rule coefficients for a generator with spectrum {0, +-1/2}.
const double kCrxPlus = (std::numbers::sqrt2 + 1.0) / (4.0 * std::numbers::sqrt2);
const double kCrxMinus = (std::numbers::sqrt2 - 1.0) / (4.0 * std::numbers::sqrt2);

double occurrence_derivative(const CircuitSpec& circuit, std::span<const double> enc,
                             std::span<const double> theta, const Backend& backend, ParamSource src,
                             std::size_t op_index, int component, GateKind kind) {
    auto f = [&](double delta) {
        AngleShift shift{src, op_index, component, delta};
        return circuit_expectation(circuit, enc, theta, backend, &shift);
    };
    if (kind == GateKind::CRX) {
        return kCrxPlus * (f(kHalfPi) - f(-kHalfPi)) - kCrxMinus * (f(3 * kHalfPi) - f(-3 * kHalfPi));
    }
    return (f(kHalfPi) - f(-kHalfPi)) / 2.0;
}

struct Primitive {
    GateOp gate;  // single-angle gate
    double angle;
    ParamSource source;
    int slot;
    double coeff;
};

// Lowers the circuit to single-angle gates in application order. U3 becomes
// RZ(lambda) RY(theta) RZ(phi), equal to U3 up to a global phase.
std::vector<Primitive> lower(const CircuitSpec& circuit, std::span<const double> enc,
                             std::span<const double> theta) {
    std::vector<Primitive> out;
    auto add = [&](const std::vector<GateOp>& ops, std::span<const double> params, ParamSource src) {
        for (const auto& op : ops) {
            if (op.kind != GateKind::U3) {
                out.push_back({op, op.coeffs[0] * params[op.param_slots[0]], src, op.param_slots[0],
                               op.coeffs[0]});
                continue;
            }
            const int order[3] = {2, 0, 1};
            const GateKind kinds[3] = {GateKind::RZ, GateKind::RY, GateKind::RZ};
            for (int j = 0; j < 3; ++j) {
                const int c = order[j];
                GateOp g = GateOp::single(kinds[j], op.wires[0], op.param_slots[c]);
                out.push_back({g, op.coeffs[c] * params[op.param_slots[c]], src, op.param_slots[c],
                               op.coeffs[c]});
            }
        }
    };
    add(circuit.encoding_ops, enc, ParamSource::Encoding);
    add(circuit.trainable_ops, theta, ParamSource::Trainable);
    return out;
}

// Applies the Hermitian generator P of exp(-i a P / 2) in place.
void apply_generator(std::span<Complex> amps, const GateOp& g) {
    static const Mat2 kX{0.0, 1.0, 1.0, 0.0};
    static const Mat2 kY{0.0, Complex{0, -1}, Complex{0, 1}, 0.0};
    static const Mat2 kZ{1.0, 0.0, 0.0, -1.0};
    const int w0 = g.wires[0], w1 = g.wires[1];
    switch (g.kind) {
        case GateKind::RX: kernels::apply_1q(amps, kX, w0); break;
        case GateKind::RY: kernels::apply_1q(amps, kY, w0); break;
        case GateKind::RZ: kernels::apply_1q(amps, kZ, w0); break;
        case GateKind::CRX: {
            // |1><1|_control (x) X_target
            kernels::apply_controlled_1q(amps, kX, w0, w1);
            const std::size_t c = std::size_t{1} << w0;
            for (std::size_t i = 0; i < amps.size(); ++i) {
                if (!(i & c)) amps[i] = 0.0;
            }
            break;
        }
        case GateKind::IsingXX:
            kernels::apply_1q(amps, kX, w0);
            kernels::apply_1q(amps, kX, w1);
            break;
        case GateKind::IsingYY:
            kernels::apply_1q(amps, kY, w0);
            kernels::apply_1q(amps, kY, w1);
            break;
        case GateKind::IsingZZ:
            kernels::apply_1q(amps, kZ, w0);
            kernels::apply_1q(amps, kZ, w1);
            break;
        case GateKind::U3: fail(ErrorCode::InvalidArgument, "U3 must be lowered before differentiation");
    }
}

CircuitGradient adjoint_gradient(const CircuitSpec& circuit, std::span<const double> enc,
                                 std::span<const double> theta) {
    CircuitGradient out;
    out.d_enc.assign(enc.size(), 0.0);
    out.d_theta.assign(theta.size(), 0.0);

    StateVector psi = run_circuit(circuit, enc, theta);
    const int wire = circuit.observables.at(0);
    out.value = expectation_z(psi, wire);

    StateVector lambda = psi;
    kernels::apply_1q(lambda.amplitudes(), Mat2{1.0, 0.0, 0.0, -1.0}, wire);
    StateVector scratch = psi;

    const auto prims = lower(circuit, enc, theta);
    for (auto it = prims.rbegin(); it != prims.rend(); ++it) {
        std::copy(psi.amplitudes().begin(), psi.amplitudes().end(), scratch.amplitudes().begin());
        apply_generator(scratch.amplitudes(), it->gate);
        Complex overlap{};
        for (std::size_t i = 0; i < psi.dimension(); ++i) overlap += std::conj(lambda[i]) * scratch[i];
        // d/da <psi|O|psi> with psi = exp(-i a P / 2) psi_prev.
        const double d = it->coeff * overlap.imag();
        if (it->source == ParamSource::Encoding) {
            out.d_enc[it->slot] += d;
        } else {
            out.d_theta[it->slot] += d;
        }
        const std::array<double, 3> inverse{-it->angle, 0.0, 0.0};
        apply_unitary(psi.amplitudes(), it->gate, inverse);
        apply_unitary(lambda.amplitudes(), it->gate, inverse);
    }
    return out;
}

}  // namespace

double param_shift(const CircuitSpec& circuit, std::span<const double> enc,
                   std::span<const double> theta, int slot, const Backend& backend,
                   ParamSource source) {
    check_circuit_inputs(circuit, enc, theta);
    const bool trainable = source == ParamSource::Trainable;
    const int count = trainable ? circuit.num_trainable : circuit.num_encoding;
    require(slot >= 0 && slot < count, ErrorCode::InvalidArgument,
            "parameter slot " + std::to_string(slot) + " outside [0, " + std::to_string(count) + ")");
    const auto& ops = trainable ? circuit.trainable_ops : circuit.encoding_ops;
    double grad = 0.0;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        for (int c = 0; c < ops[i].num_angles(); ++c) {
            if (ops[i].param_slots[c] != slot) continue;
            grad += ops[i].coeffs[c] *
                    occurrence_derivative(circuit, enc, theta, backend, source, i, c, ops[i].kind);
        }
    }
    return grad;
}

double finite_diff_oracle(const std::function<double(std::span<const double>)>& f,
                          std::span<const double> x, int slot, double h) {
    require(h > 0.0, ErrorCode::InvalidArgument, "finite-difference step must be positive");
    require(slot >= 0 && static_cast<std::size_t>(slot) < x.size(), ErrorCode::InvalidArgument,
            "finite-difference slot out of range");
    std::vector<double> xp(x.begin(), x.end());
    std::vector<double> xm(x.begin(), x.end());
    xp[slot] += h;
    xm[slot] -= h;
    return (f(xp) - f(xm)) / (2.0 * h);
}

CircuitGradient circuit_gradient(const CircuitSpec& circuit, std::span<const double> enc,
                                 std::span<const double> theta, GradMethod method,
                                 const Backend& backend) {
    circuit.validate();
    check_circuit_inputs(circuit, enc, theta);
    if (method == GradMethod::Adjoint) {
        require(backend.is_ideal(), ErrorCode::InvalidArgument,
                "adjoint differentiation requires the ideal backend");
        return adjoint_gradient(circuit, enc, theta);
    }
    CircuitGradient out;
    out.value = circuit_expectation(circuit, enc, theta, backend);
    out.d_enc.resize(enc.size());
    out.d_theta.resize(theta.size());
    for (int s = 0; s < circuit.num_encoding; ++s) {
        out.d_enc[s] = param_shift(circuit, enc, theta, s, backend, ParamSource::Encoding);
    }
    for (int s = 0; s < circuit.num_trainable; ++s) {
        out.d_theta[s] = param_shift(circuit, enc, theta, s, backend, ParamSource::Trainable);
    }
    return out;
}

}  // namespace mcvqc
