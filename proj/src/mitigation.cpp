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

#include "mcvqc/mitigation.hpp"

#include <algorithm>

#include "mcvqc/error.hpp"
#include "mcvqc/rng.hpp"

namespace mcvqc {

const char* to_string(Extrapolation e) {
    return e == Extrapolation::Linear ? "linear" : "richardson";
}

Extrapolation extrapolation_from_string(const std::string& name) {
    if (name == "linear") return Extrapolation::Linear;
    if (name == "richardson") return Extrapolation::Richardson;
    fail(ErrorCode::Config, "unknown extrapolation '" + name + "'");
}

void ZneConfig::validate() const {
    require(scale_factors.size() >= 2, ErrorCode::Config, "zne needs at least 2 scale factors");
    for (std::size_t i = 0; i < scale_factors.size(); ++i) {
        const int s = scale_factors[i];
        require(s >= 1 && s % 2 == 1, ErrorCode::Config,
                "zne scale factor " + std::to_string(s) + " must be odd and >= 1");
        require(i == 0 || s > scale_factors[i - 1], ErrorCode::Config,
                "zne scale factors must be strictly increasing");
    }
    require(exact || n_cir >= 1, ErrorCode::Config, "zne n_cir must be >= 1");
}

namespace {

GateOp inverse_gate(const GateOp& g) {
    GateOp inv = g;
    if (g.kind == GateKind::U3) {
        // U3(t, p, l)^dagger = U3(-t, -l, -p)
        inv.param_slots = {g.param_slots[0], g.param_slots[2], g.param_slots[1]};
        inv.coeffs = {-g.coeffs[0], -g.coeffs[2], -g.coeffs[1]};
    } else {
        inv.coeffs[0] = -g.coeffs[0];
    }
    return inv;
}

}  // namespace

CircuitSpec fold_global(const CircuitSpec& circuit, int lambda) {
    require(lambda >= 1 && lambda % 2 == 1, ErrorCode::InvalidArgument,
            "fold factor must be odd and >= 1, got " + std::to_string(lambda));
    circuit.validate();
    CircuitSpec out = circuit;
    std::vector<GateOp> inverse;
    inverse.reserve(circuit.trainable_ops.size());
    for (auto it = circuit.trainable_ops.rbegin(); it != circuit.trainable_ops.rend(); ++it) {
        inverse.push_back(inverse_gate(*it));
    }
    out.trainable_ops.reserve(circuit.trainable_ops.size() * static_cast<std::size_t>(lambda));
    for (int r = 0; r < (lambda - 1) / 2; ++r) {
        out.trainable_ops.insert(out.trainable_ops.end(), inverse.begin(), inverse.end());
        out.trainable_ops.insert(out.trainable_ops.end(), circuit.trainable_ops.begin(),
                                 circuit.trainable_ops.end());
    }
    return out;
}

double zne_estimate(std::span<const ScalePoint> points, Extrapolation method) {
    require(points.size() >= 2, ErrorCode::InvalidArgument, "extrapolation needs at least 2 points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            require(points[i].lambda != points[j].lambda, ErrorCode::InvalidArgument,
                    "duplicate scale factor " + std::to_string(points[i].lambda));
        }
    }
    const double n = static_cast<double>(points.size());
    if (method == Extrapolation::Linear) {
        double mx = 0.0, my = 0.0;
        for (const auto& p : points) {
            mx += p.lambda / n;
            my += p.value / n;
        }
        double sxy = 0.0, sxx = 0.0;
        for (const auto& p : points) {
            sxy += (p.lambda - mx) * (p.value - my);
            sxx += (p.lambda - mx) * (p.lambda - mx);
        }
        return my - (sxy / sxx) * mx;
    }
    // Lagrange basis evaluated at zero.
    double est = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double w = 1.0;
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (j != i) w *= points[j].lambda / (points[j].lambda - points[i].lambda);
        }
        est += w * points[i].value;
    }
    return est;
}

MitigatedResult mitigated_expectation(const CircuitSpec& circuit, std::span<const double> enc,
                                      std::span<const double> theta, const NoiseModel& noise,
                                      const ZneConfig& zne, std::uint64_t seed) {
    zne.validate();
    noise.validate();
    const int wire = circuit.observables.at(0);
    MitigatedResult res;
    for (std::size_t i = 0; i < zne.scale_factors.size(); ++i) {
        const int lambda = zne.scale_factors[i];
        const CircuitSpec folded = fold_global(circuit, lambda);
        const DensityMatrix dm = run_noisy_circuit(folded, enc, theta, noise);
        const double value = zne.exact ? expectation_dm(dm, wire)
                                       : sample_shots(dm, wire, zne.n_cir, derive_seed(seed, i));
        res.per_scale.push_back({static_cast<double>(lambda), value});
    }
    res.estimate = zne_estimate(res.per_scale, zne.extrapolation);
    return res;
}

}  // namespace mcvqc
