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

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mcvqc/statevector.hpp"

namespace mcvqc {

enum class GateKind { RX, RY, RZ, CRX, U3, IsingXX, IsingYY, IsingZZ };

const char* to_string(GateKind kind);
GateKind gate_kind_from_string(const std::string& name);

int gate_arity(GateKind kind);       // wires
int gate_num_angles(GateKind kind);  // 3 for U3, else 1

/// One gate with its parameter bindings. Angle c of the gate is
/// `coeffs[c] * params[param_slots[c]]`; folded inverses use negative
/// coefficients.
struct GateOp {
    GateKind kind = GateKind::RX;
    std::array<int, 2> wires{0, 0};
    std::array<int, 3> param_slots{0, 0, 0};
    std::array<double, 3> coeffs{1.0, 1.0, 1.0};

    static GateOp single(GateKind kind, int wire, int slot);
    static GateOp two(GateKind kind, int w0, int w1, int slot);
    /// U3(theta, phi, lambda) bound to slots (s, s+1, s+2).
    static GateOp u3(int wire, int first_slot);

    int arity() const { return gate_arity(kind); }
    int num_angles() const { return gate_num_angles(kind); }
    std::array<double, 3> angles(std::span<const double> params) const;
};

/// Gate program with separate encoding and trainable parameter spaces.
struct CircuitSpec {
    int num_qubits = 1;
    int num_encoding = 0;   // length of the encoding-angle vector
    int num_trainable = 0;  // length of theta
    std::vector<GateOp> encoding_ops;
    std::vector<GateOp> trainable_ops;
    std::vector<int> observables{0};  // Pauli-Z readout wires

    /// Throws InvalidArgument on any broken invariant.
    void validate() const;
    std::size_t gate_count() const { return encoding_ops.size() + trainable_ops.size(); }
};

/// RY(angle_j) on wire j for j < num_qubits.
CircuitSpec make_ry_encoding_circuit(int num_qubits);

// Unitaries. Rotations are exp(-i angle P / 2).
Mat2 rx_matrix(double angle);
Mat2 ry_matrix(double angle);
Mat2 rz_matrix(double angle);
Mat2 u3_matrix(double theta, double phi, double lambda);
Mat4 ising_matrix(GateKind kind, double angle);

/// Dense 2^n x 2^n unitary of a single gate (row-major), for oracles and small
/// circuits only.
std::vector<Complex> dense_gate_unitary(const GateOp& gate, std::span<const double> params,
                                        int num_qubits);

/// Applies the gate's unitary to a raw 2^num_qubits amplitude array. With
/// `conjugate`, applies the elementwise conjugate unitary instead, and
/// `wire_offset` shifts all wires (used for the bra half of a density matrix).
void apply_unitary(std::span<Complex> amps, const GateOp& gate, const std::array<double, 3>& angles,
                   bool conjugate = false, int wire_offset = 0);

StateVector apply_gate(StateVector state, const GateOp& gate, std::span<const double> params);

StateVector encode_ry(StateVector state, std::span<const double> features);

enum class ParamSource { Encoding, Trainable };

/// Additive perturbation of one angle of one gate occurrence, used by the
/// shift rules (each occurrence of a shared slot is shifted separately).
struct AngleShift {
    ParamSource source = ParamSource::Trainable;
    std::size_t op_index = 0;
    int component = 0;
    double delta = 0.0;
};

void check_circuit_inputs(const CircuitSpec& circuit, std::span<const double> enc,
                          std::span<const double> theta);

StateVector run_circuit(const CircuitSpec& circuit, std::span<const double> enc,
                        std::span<const double> theta, const AngleShift* shift = nullptr);

double expectation_z(const StateVector& state, int wire);

}  // namespace mcvqc
