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
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mcvqc/circuit.hpp"
#include "mcvqc/density.hpp"
#include "mcvqc/statevector.hpp"

namespace mcvqc {

/// Single-qubit reduced state Tr_{not j}(|psi><psi|), row-major 2x2.
Mat2 reduced_density_qubit(const StateVector& state, int wire);

/// Q = (2/n) sum_j (1 - Tr rho_j^2); 0 for a single qubit.
double meyer_wallach_q(const StateVector& state);

/// sum_j (1 - Tr rho_j^2), i.e. (n/2) Q.
double meyer_wallach_unnormalized(const StateVector& state);

struct EntanglingCapability {
    double normalized = 0.0;    // mean Q, in [0, 1]
    double unnormalized = 0.0;  // mean of (n/2) Q over the full n = k*l qubits
    int samples = 0;
};

/// Mean Meyer-Wallach Q over `num_samples` draws of every encoding and
/// trainable angle from U[0, 2pi). With `num_chips` > 1, each draw samples
/// every chip independently and scores the product state by the mean of the
/// per-chip Q values, which equals Q of the full product state.
EntanglingCapability entangling_capability(const CircuitSpec& chip, int num_chips, int num_samples,
                                           std::uint64_t seed);

/// Von Neumann entropy (bits) of the reduced state on `subset`.
double bipartite_entropy(const StateVector& state, std::span<const int> subset);

enum class GradProbe {
    FirstSlot,  // theta slot 0 of chip 1
    AllSlots,   // per-slot variance averaged over chip 1's slots
};

struct GradVarianceOptions {
    GradProbe probe = GradProbe::AllSlots;
    double target = 0.0;
};

/// Sample variance of dL/dtheta for chip 1 of a k-chip ensemble, with
/// L = sum_c (f_c - target)^2 over the per-chip readouts and all angles drawn
/// from U[0, 2pi). Only chip 1 enters the derivative since chips share no
/// gates.
double gradient_variance(const CircuitSpec& chip, int num_chips, int num_samples, std::uint64_t seed,
                         const GradVarianceOptions& options = {});

double quantum_error(double val_loss_noisy, double val_loss_ideal);

struct ErrorDecomposition {
    double ideal = 0.0;  // Tr[Z rho_ideal]
    double noisy = 0.0;  // Tr[Z rho_out]
    double bias_sq = 0.0;
    double variance = 0.0;  // (Tr[Z^2 rho] - Tr[Z rho]^2) / n_cir
    double mse = 0.0;
    std::uint64_t n_cir = 1;
};

ErrorDecomposition error_decomposition(const CircuitSpec& circuit, std::span<const double> enc,
                                       std::span<const double> theta, const NoiseModel& noise,
                                       std::uint64_t n_cir);

struct EnsembleErrorDecomposition {
    std::vector<ErrorDecomposition> per_chip;
    double summed_bias_sq = 0.0;      // sum_c bias_c^2
    double aggregate_bias_sq = 0.0;   // (mean_c bias_c)^2
    double aggregate_variance = 0.0;  // variance of the mean of the chip estimators
};

EnsembleErrorDecomposition ensemble_error_decomposition(const CircuitSpec& chip,
                                                        const std::vector<std::vector<double>>& encs,
                                                        const std::vector<std::vector<double>>& thetas,
                                                        const NoiseModel& noise, std::uint64_t n_cir);

/// Welford accumulator.
class RunningStats {
public:
    void add(double x);
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    /// Unbiased (n - 1) sample variance.
    double variance() const;

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct MetricsRecord {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    std::optional<double> test_loss;
    std::optional<double> gen_error;
    std::optional<double> quantum_error;
    std::optional<double> ent_capability;
    std::optional<double> grad_variance;
};

/// test_loss - final train_loss.
double generalization_error(double test_loss, double final_train_loss);

/// One row of a metric sweep: metric,n,k,l,S,seed,value.
struct MetricRow {
    std::string metric;
    int n = 0;
    int k = 0;
    int l = 0;
    int samples = 0;
    std::uint64_t seed = 0;
    double value = 0.0;
};

void write_metric_csv(std::ostream& os, const std::vector<MetricRow>& rows);

}  // namespace mcvqc
