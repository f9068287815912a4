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
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mcvqc {

using Complex = std::complex<double>;

/// Row-major 2x2 and 4x4 complex matrices.
using Mat2 = std::array<Complex, 4>;
using Mat4 = std::array<Complex, 16>;

inline constexpr int kMaxStateQubits = 24;

/// Pure state over `num_qubits` wires. Wire w is bit w of the amplitude
/// index (little-endian).
class StateVector {
public:
    /// |0...0>; throws ErrorCode::Capacity unless 1 <= num_qubits <= 24.
    explicit StateVector(int num_qubits);
    StateVector(int num_qubits, std::vector<Complex> amplitudes);

    int num_qubits() const noexcept { return num_qubits_; }
    std::size_t dimension() const noexcept { return amps_.size(); }

    std::span<const Complex> amplitudes() const noexcept { return amps_; }
    std::span<Complex> amplitudes() noexcept { return amps_; }
    const Complex& operator[](std::size_t i) const { return amps_[i]; }

    double norm() const;

private:
    int num_qubits_;
    std::vector<Complex> amps_;
};

StateVector init_zero_state(int num_qubits);

/// Tensor product with `low` occupying the low-order wires.
StateVector tensor_product(const StateVector& low, const StateVector& high);

namespace kernels {

// Raw kernels shared by the statevector and the (vectorized) density matrix.
// `amps` has 2^num_qubits entries.

void apply_1q(std::span<Complex> amps, const Mat2& m, int wire);

/// `m` acts on the pair (w_hi, w_lo) with local index 2*bit(w_hi) + bit(w_lo).
void apply_2q(std::span<Complex> amps, const Mat4& m, int w_hi, int w_lo);

void apply_controlled_1q(std::span<Complex> amps, const Mat2& m, int control, int target);

}  // namespace kernels

}  // namespace mcvqc
