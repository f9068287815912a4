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

#include "mcvqc/circuit.hpp"

#include <cmath>

#include "mcvqc/error.hpp"

namespace mcvqc {

namespace {

constexpr Complex kI{0.0, 1.0};

Mat2 conj(Mat2 m) {
    for (auto& x : m) x = std::conj(x);
    return m;
}

Mat4 conj(Mat4 m) {
    for (auto& x : m) x = std::conj(x);
    return m;
}

void check_binding(const GateOp& g, int num_qubits, int num_params, const char* where) {
    const int arity = g.arity();
    for (int i = 0; i < arity; ++i) {
        require(g.wires[i] >= 0 && g.wires[i] < num_qubits, ErrorCode::InvalidArgument,
                std::string(where) + ": wire " + std::to_string(g.wires[i]) + " out of range for " +
                    std::to_string(num_qubits) + " qubits");
    }
    require(arity == 1 || g.wires[0] != g.wires[1], ErrorCode::InvalidArgument,
            std::string(where) + ": two-qubit gate on repeated wire");
    for (int c = 0; c < g.num_angles(); ++c) {
        require(g.param_slots[c] >= 0 && g.param_slots[c] < num_params, ErrorCode::InvalidArgument,
                std::string(where) + ": parameter slot " + std::to_string(g.param_slots[c]) +
                    " outside [0, " + std::to_string(num_params) + ")");
    }
}

}  // namespace

const char* to_string(GateKind kind) {
    switch (kind) {
        case GateKind::RX: return "RX";
        case GateKind::RY: return "RY";
        case GateKind::RZ: return "RZ";
        case GateKind::CRX: return "CRX";
        case GateKind::U3: return "U3";
        case GateKind::IsingXX: return "IsingXX";
        case GateKind::IsingYY: return "IsingYY";
        case GateKind::IsingZZ: return "IsingZZ";
    }
    return "?";
}

GateKind gate_kind_from_string(const std::string& name) {
    for (GateKind k : {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::CRX, GateKind::U3,
                       GateKind::IsingXX, GateKind::IsingYY, GateKind::IsingZZ}) {
        if (name == to_string(k)) return k;
    }
    fail(ErrorCode::Format, "unknown gate kind '" + name + "'");
}

int gate_arity(GateKind kind) {
    switch (kind) {
        case GateKind::CRX:
        case GateKind::IsingXX:
        case GateKind::IsingYY:
        case GateKind::IsingZZ: return 2;
        default: return 1;
    }
}

int gate_num_angles(GateKind kind) { return kind == GateKind::U3 ? 3 : 1; }

GateOp GateOp::single(GateKind kind, int wire, int slot) {
    GateOp g;
    g.kind = kind;
    g.wires = {wire, wire};
    g.param_slots = {slot, slot, slot};
    return g;
}

GateOp GateOp::two(GateKind kind, int w0, int w1, int slot) {
    GateOp g;
    g.kind = kind;
    g.wires = {w0, w1};
    g.param_slots = {slot, slot, slot};
    return g;
}

GateOp GateOp::u3(int wire, int first_slot) {
    GateOp g;
    g.kind = GateKind::U3;
    g.wires = {wire, wire};
    g.param_slots = {first_slot, first_slot + 1, first_slot + 2};
    return g;
}

std::array<double, 3> GateOp::angles(std::span<const double> params) const {
    std::array<double, 3> out{0.0, 0.0, 0.0};
    for (int c = 0; c < num_angles(); ++c) out[c] = coeffs[c] * params[param_slots[c]];
    return out;
}

void CircuitSpec::validate() const {
    require(num_qubits >= 1 && num_qubits <= kMaxStateQubits, ErrorCode::Capacity,
            "circuit width " + std::to_string(num_qubits) + " outside [1, 24]");
    require(num_encoding >= 0 && num_trainable >= 0, ErrorCode::InvalidArgument,
            "negative parameter count");
    for (const auto& g : encoding_ops) check_binding(g, num_qubits, num_encoding, "encoding op");
    for (const auto& g : trainable_ops) check_binding(g, num_qubits, num_trainable, "trainable op");
    require(!observables.empty(), ErrorCode::InvalidArgument, "circuit has no observable");
    for (int w : observables) {
        require(w >= 0 && w < num_qubits, ErrorCode::InvalidArgument,
                "observable wire " + std::to_string(w) + " out of range");
    }
}

CircuitSpec make_ry_encoding_circuit(int num_qubits) {
    CircuitSpec c;
    c.num_qubits = num_qubits;
    c.num_encoding = num_qubits;
    for (int w = 0; w < num_qubits; ++w) c.encoding_ops.push_back(GateOp::single(GateKind::RY, w, w));
    return c;
}

Mat2 rx_matrix(double a) {
    const double c = std::cos(a / 2), s = std::sin(a / 2);
    return {c, -kI * s, -kI * s, c};
}

Mat2 ry_matrix(double a) {
    const double c = std::cos(a / 2), s = std::sin(a / 2);
    return {c, -s, s, c};
}

Mat2 rz_matrix(double a) {
    return {std::polar(1.0, -a / 2), 0.0, 0.0, std::polar(1.0, a / 2)};
}

Mat2 u3_matrix(double theta, double phi, double lambda) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return {c, -std::polar(s, lambda), std::polar(s, phi), std::polar(c, phi + lambda)};
}

Mat4 ising_matrix(GateKind kind, double a) {
    const double c = std::cos(a / 2), s = std::sin(a / 2);
    Mat4 m{};
    switch (kind) {
        case GateKind::IsingXX:
            m[0] = m[5] = m[10] = m[15] = c;
            m[3] = m[6] = m[9] = m[12] = -kI * s;
            break;
        case GateKind::IsingYY:
            m[0] = m[5] = m[10] = m[15] = c;
            m[3] = m[12] = kI * s;
            m[6] = m[9] = -kI * s;
            break;
        case GateKind::IsingZZ:
            m[0] = m[15] = std::polar(1.0, -a / 2);
            m[5] = m[10] = std::polar(1.0, a / 2);
            break;
        default: fail(ErrorCode::InvalidArgument, "not an Ising gate");
    }
    return m;
}

void apply_unitary(std::span<Complex> amps, const GateOp& gate, const std::array<double, 3>& angles,
                   bool conjugate, int wire_offset) {
    const int w0 = gate.wires[0] + wire_offset;
    const int w1 = gate.wires[1] + wire_offset;
    auto one = [&](Mat2 m) {
        kernels::apply_1q(amps, conjugate ? conj(m) : m, w0);
    };
    switch (gate.kind) {
        case GateKind::RX: one(rx_matrix(angles[0])); break;
        case GateKind::RY: one(ry_matrix(angles[0])); break;
        case GateKind::RZ: one(rz_matrix(angles[0])); break;
        case GateKind::U3: one(u3_matrix(angles[0], angles[1], angles[2])); break;
        case GateKind::CRX: {
            const Mat2 m = rx_matrix(angles[0]);
            kernels::apply_controlled_1q(amps, conjugate ? conj(m) : m, w0, w1);
            break;
        }
        case GateKind::IsingXX:
        case GateKind::IsingYY:
        case GateKind::IsingZZ: {
            const Mat4 m = ising_matrix(gate.kind, angles[0]);
            kernels::apply_2q(amps, conjugate ? conj(m) : m, w0, w1);
            break;
        }
    }
}

std::vector<Complex> dense_gate_unitary(const GateOp& gate, std::span<const double> params,
                                        int num_qubits) {
    const std::size_t dim = std::size_t{1} << num_qubits;
    std::vector<Complex> u(dim * dim);
    std::vector<Complex> col(dim);
    const auto angles = gate.angles(params);
    for (std::size_t j = 0; j < dim; ++j) {
        std::fill(col.begin(), col.end(), Complex{});
        col[j] = 1.0;
        apply_unitary(col, gate, angles);
        for (std::size_t i = 0; i < dim; ++i) u[i * dim + j] = col[i];
    }
    return u;
}

StateVector apply_gate(StateVector state, const GateOp& gate, std::span<const double> params) {
    check_binding(gate, state.num_qubits(), static_cast<int>(params.size()), "apply_gate");
    apply_unitary(state.amplitudes(), gate, gate.angles(params));
    return state;
}

StateVector encode_ry(StateVector state, std::span<const double> features) {
    require(static_cast<int>(features.size()) == state.num_qubits(), ErrorCode::DimensionMismatch,
            "encode_ry: " + std::to_string(features.size()) + " features for " +
                std::to_string(state.num_qubits()) + " qubits");
    for (int w = 0; w < state.num_qubits(); ++w) {
        kernels::apply_1q(state.amplitudes(), ry_matrix(features[w]), w);
    }
    return state;
}

void check_circuit_inputs(const CircuitSpec& circuit, std::span<const double> enc,
                          std::span<const double> theta) {
    require(static_cast<int>(enc.size()) == circuit.num_encoding, ErrorCode::DimensionMismatch,
            "encoding vector has " + std::to_string(enc.size()) + " entries, circuit expects " +
                std::to_string(circuit.num_encoding));
    require(static_cast<int>(theta.size()) == circuit.num_trainable, ErrorCode::DimensionMismatch,
            "theta has " + std::to_string(theta.size()) + " entries, circuit expects " +
                std::to_string(circuit.num_trainable));
}

StateVector run_circuit(const CircuitSpec& circuit, std::span<const double> enc,
                        std::span<const double> theta, const AngleShift* shift) {
    circuit.validate();
    check_circuit_inputs(circuit, enc, theta);
    StateVector state(circuit.num_qubits);
    auto run = [&](const std::vector<GateOp>& ops, std::span<const double> params, ParamSource src) {
        for (std::size_t i = 0; i < ops.size(); ++i) {
            auto angles = ops[i].angles(params);
            if (shift && shift->source == src && shift->op_index == i) {
                angles[shift->component] += shift->delta;
            }
            apply_unitary(state.amplitudes(), ops[i], angles);
        }
    };
    run(circuit.encoding_ops, enc, ParamSource::Encoding);
    run(circuit.trainable_ops, theta, ParamSource::Trainable);
    return state;
}

double expectation_z(const StateVector& state, int wire) {
    require(wire >= 0 && wire < state.num_qubits(), ErrorCode::InvalidArgument,
            "readout wire " + std::to_string(wire) + " out of range");
    const std::size_t bit = std::size_t{1} << wire;
    double e = 0.0;
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        const double p = std::norm(state[i]);
        e += (i & bit) ? -p : p;
    }
    return e;
}

}  // namespace mcvqc
