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

#include "mcvqc/backend.hpp"

#include <bit>
#include <sstream>

#include "mcvqc/error.hpp"
#include "mcvqc/rng.hpp"

namespace mcvqc {

namespace {

std::uint64_t angle_hash(std::span<const double> enc, std::span<const double> theta) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::span<const double> v) {
        for (double x : v) {
            const auto bits = std::bit_cast<std::uint64_t>(x);
            for (int b = 0; b < 8; ++b) {
                h ^= (bits >> (8 * b)) & 0xFF;
                h *= 1099511628211ULL;
            }
        }
    };
    mix(enc);
    mix(theta);
    return h;
}

}  // namespace

std::string Backend::describe() const {
    if (is_ideal()) return "ideal";
    std::ostringstream os;
    os << (kind == Kind::Mitigated ? "zne" : "noisy") << "(eps=" << noise.depolarizing_eps
       << ", gamma=" << noise.amp_damping_gamma;
    if (n_cir > 0) os << ", n_cir=" << n_cir;
    os << ")";
    return os.str();
}

double circuit_expectation(const CircuitSpec& circuit, std::span<const double> enc,
                           std::span<const double> theta, const Backend& backend,
                           const AngleShift* shift) {
    const int wire = circuit.observables.at(0);
    if (backend.is_ideal()) return expectation_z(run_circuit(circuit, enc, theta, shift), wire);
    // Shot streams are keyed on the circuit inputs so repeated calls are reproducible.
    const std::uint64_t key = derive_seed(backend.seed, angle_hash(enc, theta));
    if (backend.kind == Backend::Kind::Mitigated) {
        require(shift == nullptr, ErrorCode::InvalidArgument, "mitigated backend does not support shifted circuits");
        return mitigated_expectation(circuit, enc, theta, backend.noise, backend.zne, key).estimate;
    }
    const DensityMatrix dm = run_noisy_circuit(circuit, enc, theta, backend.noise, shift);
    if (backend.n_cir == 0) return expectation_dm(dm, wire);
    return sample_shots(dm, wire, backend.n_cir, key);
}

}  // namespace mcvqc
