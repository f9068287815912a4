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
#include <string>
#include <vector>

#include "mcvqc/circuit.hpp"
#include "mcvqc/density.hpp"

namespace mcvqc {

enum class Extrapolation { Linear, Richardson };

const char* to_string(Extrapolation e);
Extrapolation extrapolation_from_string(const std::string& name);

struct ZneConfig {
    std::vector<int> scale_factors{1, 3, 5};
    Extrapolation extrapolation = Extrapolation::Linear;
    std::uint64_t n_cir = 1000;
    /// Use exact noisy expectations instead of shot means.
    bool exact = false;

    void validate() const;
};

/// Replaces the trainable sequence U with U (U^dagger U)^((lambda - 1) / 2).
CircuitSpec fold_global(const CircuitSpec& circuit, int lambda);

struct ScalePoint {
    double lambda = 1.0;
    double value = 0.0;
};

double zne_estimate(std::span<const ScalePoint> points, Extrapolation method);

struct MitigatedResult {
    double estimate = 0.0;
    std::vector<ScalePoint> per_scale;
};

MitigatedResult mitigated_expectation(const CircuitSpec& circuit, std::span<const double> enc,
                                      std::span<const double> theta, const NoiseModel& noise,
                                      const ZneConfig& zne, std::uint64_t seed);

}  // namespace mcvqc
