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

#include <span>
#include <string>

#include "mcvqc/circuit.hpp"
#include "mcvqc/density.hpp"
#include "mcvqc/mitigation.hpp"

namespace mcvqc {

/// Where circuit expectations come from: exact statevector, density matrix
/// under a per-gate noise model, or that noisy model with zero-noise extrapolation.
struct Backend {
    enum class Kind { Ideal, Noisy, Mitigated };
    Kind kind = Kind::Ideal;
    NoiseModel noise;
    /// Shots per noisy expectation; 0 means exact.
    std::uint64_t n_cir = 0;
    std::uint64_t seed = 0;
    ZneConfig zne;

    static Backend ideal() { return {}; }
    static Backend noisy(NoiseModel noise, std::uint64_t n_cir = 0, std::uint64_t seed = 0) {
        Backend b;
        b.kind = Kind::Noisy;
        b.noise = noise;
        b.n_cir = n_cir;
        b.seed = seed;
        return b;
    }
    static Backend mitigated(NoiseModel noise, ZneConfig zne, std::uint64_t seed = 0) {
        Backend b;
        b.kind = Kind::Mitigated;
        b.noise = noise;
        b.zne = std::move(zne);
        b.seed = seed;
        return b;
    }

    bool is_ideal() const { return kind == Kind::Ideal; }
    std::string describe() const;
};

/// <Z> on the circuit's first observable wire.
double circuit_expectation(const CircuitSpec& circuit, std::span<const double> enc,
                           std::span<const double> theta, const Backend& backend,
                           const AngleShift* shift = nullptr);

}  // namespace mcvqc
