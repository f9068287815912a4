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

#include "mcvqc/density.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mcvqc/error.hpp"

namespace mcvqc {

namespace {

void check_wire(const DensityMatrix& dm, int wire) {
    require(wire >= 0 && wire < dm.num_qubits(), ErrorCode::InvalidArgument,
            "wire " + std::to_string(wire) + " out of range for " + std::to_string(dm.num_qubits()) +
                "-qubit density matrix");
}

void check_probability(double p, const char* name) {
    require(p >= 0.0 && p <= 1.0, ErrorCode::InvalidArgument,
            std::string(name) + " = " + std::to_string(p) + " outside [0, 1]");
}

// Visits every 2x2 block (r00, r01, r10, r11) of `wire`, where rAB has ket
// bit A and bra bit B on that wire.
template <typename F>
void for_each_wire_block(DensityMatrix& dm, int wire, F&& f) {
    auto raw = dm.raw();
    const std::size_t ket = std::size_t{1} << wire;
    const std::size_t bra = std::size_t{1} << (wire + dm.num_qubits());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (i & (ket | bra)) continue;
        f(raw[i], raw[i | bra], raw[i | ket], raw[i | ket | bra]);
    }
}

}  // namespace

DensityMatrix::DensityMatrix(int num_qubits) : num_qubits_(num_qubits) {
    require(num_qubits >= 1 && num_qubits <= kMaxDensityQubits, ErrorCode::Capacity,
            "density-matrix width " + std::to_string(num_qubits) + " outside [1, " +
                std::to_string(kMaxDensityQubits) + "]");
    data_.assign(std::size_t{1} << (2 * num_qubits), Complex{});
    data_[0] = 1.0;
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
    DensityMatrix dm(num_qubits);
    const std::size_t d = dm.dimension();
    dm.data_[0] = 0.0;
    for (std::size_t i = 0; i < d; ++i) dm(i, i) = 1.0 / static_cast<double>(d);
    return dm;
}

Complex DensityMatrix::trace() const {
    Complex t{};
    for (std::size_t i = 0; i < dimension(); ++i) t += (*this)(i, i);
    return t;
}

double DensityMatrix::purity() const {
    // Tr(rho^2) = sum_ij rho_ij rho_ji = sum_ij |rho_ij|^2 for Hermitian rho.
    double s = 0.0;
    for (const auto& x : data_) s += std::norm(x);
    return s;
}

double DensityMatrix::hermiticity_error() const {
    double worst = 0.0;
    const std::size_t d = dimension();
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        }
    }
    return worst;
}

void NoiseModel::validate() const {
    check_probability(depolarizing_eps, "depolarizing eps");
    check_probability(amp_damping_gamma, "amplitude-damping gamma");
}

DensityMatrix to_density(const StateVector& state) {
    DensityMatrix dm(state.num_qubits());
    const std::size_t d = dm.dimension();
    for (std::size_t j = 0; j < d; ++j) {
        const Complex cj = std::conj(state[j]);
        for (std::size_t i = 0; i < d; ++i) dm(i, j) = state[i] * cj;
    }
    return dm;
}

DensityMatrix apply_depolarizing(DensityMatrix dm, int wire, double eps) {
    check_wire(dm, wire);
    check_probability(eps, "depolarizing eps");
    if (eps == 0.0) return dm;
    // Sum over X, Y, Z of P rho P equals 2 I (x) Tr_wire(rho) - rho.
    const double keep = 1.0 - 4.0 * eps / 3.0;
    const double mix = 2.0 * eps / 3.0;
    for_each_wire_block(dm, wire, [&](Complex& r00, Complex& r01, Complex& r10, Complex& r11) {
        const Complex t = r00 + r11;
        r00 = keep * r00 + mix * t;
        r11 = keep * r11 + mix * t;
        r01 *= keep;
        r10 *= keep;
    });
    return dm;
}

DensityMatrix apply_amplitude_damping(DensityMatrix dm, int wire, double gamma) {
    check_wire(dm, wire);
    check_probability(gamma, "amplitude-damping gamma");
    if (gamma == 0.0) return dm;
    const double s = std::sqrt(1.0 - gamma);
    for_each_wire_block(dm, wire, [&](Complex& r00, Complex& r01, Complex& r10, Complex& r11) {
        r00 += gamma * r11;
        r11 *= 1.0 - gamma;
        r01 *= s;
        r10 *= s;
    });
    return dm;
}

DensityMatrix apply_gate_dm(DensityMatrix dm, const GateOp& gate, const std::array<double, 3>& angles) {
    apply_unitary(dm.raw(), gate, angles, false, 0);
    apply_unitary(dm.raw(), gate, angles, true, dm.num_qubits());
    return dm;
}

DensityMatrix run_noisy_circuit(const CircuitSpec& circuit, std::span<const double> enc,
                                std::span<const double> theta, const NoiseModel& noise,
                                const AngleShift* shift) {
    require(circuit.num_qubits <= kMaxDensityQubits, ErrorCode::Capacity,
            "noisy simulation limited to " + std::to_string(kMaxDensityQubits) + " qubits, circuit has " +
                std::to_string(circuit.num_qubits));
    circuit.validate();
    check_circuit_inputs(circuit, enc, theta);
    noise.validate();
    DensityMatrix dm(circuit.num_qubits);
    auto run = [&](const std::vector<GateOp>& ops, std::span<const double> params, ParamSource src) {
        for (std::size_t i = 0; i < ops.size(); ++i) {
            auto angles = ops[i].angles(params);
            if (shift && shift->source == src && shift->op_index == i) {
                angles[shift->component] += shift->delta;
            }
            dm = apply_gate_dm(std::move(dm), ops[i], angles);
            for (int k = 0; k < ops[i].arity(); ++k) {
                dm = apply_depolarizing(std::move(dm), ops[i].wires[k], noise.depolarizing_eps);
                dm = apply_amplitude_damping(std::move(dm), ops[i].wires[k], noise.amp_damping_gamma);
            }
        }
    };
    run(circuit.encoding_ops, enc, ParamSource::Encoding);
    run(circuit.trainable_ops, theta, ParamSource::Trainable);
    return dm;
}

double expectation_dm(const DensityMatrix& dm, int wire) {
    check_wire(dm, wire);
    const std::size_t bit = std::size_t{1} << wire;
    double e = 0.0;
    for (std::size_t i = 0; i < dm.dimension(); ++i) {
        const double p = dm(i, i).real();
        e += (i & bit) ? -p : p;
    }
    return e;
}

double sample_mean(double expectation, std::uint64_t n_cir, std::uint64_t seed) {
    require(n_cir >= 1, ErrorCode::InvalidArgument, "shot count must be at least 1");
    const double p_plus = std::clamp((1.0 + expectation) / 2.0, 0.0, 1.0);
    std::mt19937_64 rng(seed);
    std::binomial_distribution<std::uint64_t> draw(n_cir, p_plus);
    const auto plus = draw(rng);
    const double n = static_cast<double>(n_cir);
    return (2.0 * static_cast<double>(plus) - n) / n;
}

double sample_shots(const DensityMatrix& dm, int wire, std::uint64_t n_cir, std::uint64_t seed) {
    return sample_mean(expectation_dm(dm, wire), n_cir, seed);
}

}  // namespace mcvqc
