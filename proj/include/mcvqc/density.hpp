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

#include <cstdint>
#include <span>
#include <vector>

#include "mcvqc/circuit.hpp"
#include "mcvqc/statevector.hpp"

namespace mcvqc {

inline constexpr int kMaxDensityQubits = 12;

/// Mixed state on `num_qubits` wires. Element (row, col) is stored at
/// row + (col << num_qubits), so the storage is a 2l-qubit vector whose low
/// half indexes the ket and high half the bra.
class DensityMatrix {
public:
    /// |0...0><0...0|; throws ErrorCode::Capacity unless 1 <= num_qubits <= 12.
    explicit DensityMatrix(int num_qubits);

    int num_qubits() const noexcept { return num_qubits_; }
    std::size_t dimension() const noexcept { return std::size_t{1} << num_qubits_; }

    Complex operator()(std::size_t row, std::size_t col) const {
        return data_[row + (col << num_qubits_)];
    }
    Complex& operator()(std::size_t row, std::size_t col) {
        return data_[row + (col << num_qubits_)];
    }

    std::span<Complex> raw() noexcept { return data_; }
    std::span<const Complex> raw() const noexcept { return data_; }

    Complex trace() const;
    double purity() const;  // Tr(rho^2)
    /// Max |rho_ij - conj(rho_ji)|.
    double hermiticity_error() const;

    static DensityMatrix maximally_mixed(int num_qubits);

private:
    int num_qubits_;
    std::vector<Complex> data_;
};

/// Per-gate noise: every gate is followed, on each wire it touches, by a
/// depolarizing channel and then an amplitude-damping channel.
struct NoiseModel {
    double depolarizing_eps = 0.0;
    double amp_damping_gamma = 0.0;

    void validate() const;
    bool is_noiseless() const { return depolarizing_eps == 0.0 && amp_damping_gamma == 0.0; }
};

DensityMatrix to_density(const StateVector& state);

/// (1 - eps) rho + eps/3 (X rho X + Y rho Y + Z rho Z) on `wire`.
DensityMatrix apply_depolarizing(DensityMatrix dm, int wire, double eps);

/// Kraus pair K0 = diag(1, sqrt(1 - gamma)), K1 = sqrt(gamma) |0><1| on `wire`.
DensityMatrix apply_amplitude_damping(DensityMatrix dm, int wire, double gamma);

/// Unitary conjugation by one gate.
DensityMatrix apply_gate_dm(DensityMatrix dm, const GateOp& gate, const std::array<double, 3>& angles);

DensityMatrix run_noisy_circuit(const CircuitSpec& circuit, std::span<const double> enc,
                                std::span<const double> theta, const NoiseModel& noise,
                                const AngleShift* shift = nullptr);

double expectation_dm(const DensityMatrix& dm, int wire);

/// Mean of `n_cir` +/-1 outcomes with P(+1) = (1 + expectation) / 2.
double sample_mean(double expectation, std::uint64_t n_cir, std::uint64_t seed);

double sample_shots(const DensityMatrix& dm, int wire, std::uint64_t n_cir, std::uint64_t seed);

}  // namespace mcvqc
