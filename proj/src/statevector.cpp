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

#include "mcvqc/statevector.hpp"

#include <cmath>
#include <string>

#include "mcvqc/error.hpp"

namespace mcvqc {

namespace {

void check_qubits(int num_qubits) {
    require(num_qubits >= 1 && num_qubits <= kMaxStateQubits, ErrorCode::Capacity,
            "statevector width " + std::to_string(num_qubits) + " outside [1, " +
                std::to_string(kMaxStateQubits) + "]");
}

}  // namespace

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    check_qubits(num_qubits);
    amps_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector::StateVector(int num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
    check_qubits(num_qubits);
    require(amps_.size() == (std::size_t{1} << num_qubits), ErrorCode::DimensionMismatch,
            "amplitude count " + std::to_string(amps_.size()) + " does not match 2^" +
                std::to_string(num_qubits));
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

StateVector init_zero_state(int num_qubits) { return StateVector(num_qubits); }

StateVector tensor_product(const StateVector& low, const StateVector& high) {
    const int n = low.num_qubits() + high.num_qubits();
    require(n <= kMaxStateQubits, ErrorCode::Capacity, "tensor product exceeds qubit cap");
    std::vector<Complex> out(std::size_t{1} << n);
    const std::size_t dl = low.dimension();
    for (std::size_t h = 0; h < high.dimension(); ++h) {
        for (std::size_t l = 0; l < dl; ++l) out[h * dl + l] = high[h] * low[l];
    }
    return StateVector(n, std::move(out));
}

namespace kernels {

void apply_1q(std::span<Complex> amps, const Mat2& m, int wire) {
    const std::size_t stride = std::size_t{1} << wire;
    const std::size_t n = amps.size();
    for (std::size_t base = 0; base < n; base += 2 * stride) {
        for (std::size_t j = base; j < base + stride; ++j) {
            const Complex a0 = amps[j];
            const Complex a1 = amps[j + stride];
            amps[j] = m[0] * a0 + m[1] * a1;
            amps[j + stride] = m[2] * a0 + m[3] * a1;
        }
    }
}

void apply_2q(std::span<Complex> amps, const Mat4& m, int w_hi, int w_lo) {
    const std::size_t hi = std::size_t{1} << w_hi;
    const std::size_t lo = std::size_t{1} << w_lo;
    const std::size_t mask = hi | lo;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & mask) continue;
        const std::size_t idx[4] = {i, i | lo, i | hi, i | hi | lo};
        const Complex a[4] = {amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]};
        for (int r = 0; r < 4; ++r) {
            amps[idx[r]] = m[4 * r] * a[0] + m[4 * r + 1] * a[1] + m[4 * r + 2] * a[2] +
                           m[4 * r + 3] * a[3];
        }
    }
}

void apply_controlled_1q(std::span<Complex> amps, const Mat2& m, int control, int target) {
    const std::size_t c = std::size_t{1} << control;
    const std::size_t t = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (!(i & c) || (i & t)) continue;
        const Complex a0 = amps[i];
        const Complex a1 = amps[i | t];
        amps[i] = m[0] * a0 + m[1] * a1;
        amps[i | t] = m[2] * a0 + m[3] * a1;
    }
}

}  // namespace kernels

}  // namespace mcvqc
