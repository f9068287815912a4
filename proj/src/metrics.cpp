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

#include "mcvqc/metrics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>

#include "mcvqc/backend.hpp"
#include "mcvqc/error.hpp"
#include "mcvqc/gradients.hpp"
#include "mcvqc/rng.hpp"

namespace mcvqc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void fill_uniform_angles(std::vector<double>& v, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(0.0, kTwoPi);
    for (auto& x : v) x = dist(rng);
}

}  // namespace

Mat2 reduced_density_qubit(const StateVector& state, int wire) {
    require(wire >= 0 && wire < state.num_qubits(), ErrorCode::InvalidArgument,
            "wire " + std::to_string(wire) + " out of range");
    const std::size_t bit = std::size_t{1} << wire;
    Mat2 rho{};
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        if (i & bit) continue;
        const Complex a0 = state[i];
        const Complex a1 = state[i | bit];
        rho[0] += a0 * std::conj(a0);
        rho[1] += a0 * std::conj(a1);
        rho[2] += a1 * std::conj(a0);
        rho[3] += a1 * std::conj(a1);
    }
    return rho;
}

double meyer_wallach_unnormalized(const StateVector& state) {
    double s = 0.0;
    for (int j = 0; j < state.num_qubits(); ++j) {
        const Mat2 r = reduced_density_qubit(state, j);
        const double purity = std::norm(r[0]) + std::norm(r[1]) + std::norm(r[2]) + std::norm(r[3]);
        s += 1.0 - purity;
    }
    return s;
}

double meyer_wallach_q(const StateVector& state) {
    if (state.num_qubits() < 2) return 0.0;
    return 2.0 / state.num_qubits() * meyer_wallach_unnormalized(state);
}

EntanglingCapability entangling_capability(const CircuitSpec& chip, int num_chips, int num_samples,
                                           std::uint64_t seed) {
    require(num_samples >= 1, ErrorCode::InvalidArgument, "entangling capability needs >= 1 sample");
    require(num_chips >= 1, ErrorCode::InvalidArgument, "chip count must be >= 1");
    chip.validate();
    std::mt19937_64 rng(seed);
    std::vector<double> enc(chip.num_encoding);
    std::vector<double> theta(chip.num_trainable);
    RunningStats q;
    for (int s = 0; s < num_samples; ++s) {
        double sum = 0.0;
        for (int c = 0; c < num_chips; ++c) {
            fill_uniform_angles(enc, rng);
            fill_uniform_angles(theta, rng);
            sum += meyer_wallach_q(run_circuit(chip, enc, theta));
        }
        q.add(sum / num_chips);
    }
    EntanglingCapability out;
    out.normalized = q.mean();
    out.unnormalized = q.mean() * chip.num_qubits * num_chips / 2.0;
    out.samples = num_samples;
    return out;
}

double bipartite_entropy(const StateVector& state, std::span<const int> subset) {
    const int n = state.num_qubits();
    require(!subset.empty() && static_cast<int>(subset.size()) < n, ErrorCode::InvalidArgument,
            "entropy subset must be nonempty and proper");
    std::vector<int> in_subset(n, 0);
    for (int w : subset) {
        require(w >= 0 && w < n && !in_subset[w], ErrorCode::InvalidArgument, "invalid entropy subset");
        in_subset[w] = 1;
    }
    std::vector<int> rest;
    for (int w = 0; w < n; ++w) {
        if (!in_subset[w]) rest.push_back(w);
    }
    const int na = static_cast<int>(subset.size());
    const int nb = static_cast<int>(rest.size());
    // psi reshaped as a (2^na x 2^nb) matrix M; rho_A = M M^dagger.
    Eigen::MatrixXcd m(1 << na, 1 << nb);
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        std::size_t a = 0, b = 0;
        for (int j = 0; j < na; ++j) a |= ((i >> subset[j]) & 1u) << j;
        for (int j = 0; j < nb; ++j) b |= ((i >> rest[j]) & 1u) << j;
        m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = state[i];
    }
    const Eigen::MatrixXcd rho = m * m.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
    double entropy = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double p = solver.eigenvalues()(i);
        if (p > 1e-15) entropy -= p * std::log2(p);
    }
    return std::max(entropy, 0.0);
}

double gradient_variance(const CircuitSpec& chip, int num_chips, int num_samples, std::uint64_t seed,
                         const GradVarianceOptions& options) {
    require(num_samples >= 2, ErrorCode::InvalidArgument, "gradient variance needs >= 2 samples");
    require(num_chips >= 1, ErrorCode::InvalidArgument, "chip count must be >= 1");
    chip.validate();
    require(chip.num_trainable >= 1, ErrorCode::InvalidArgument, "chip has no trainable parameter");
    std::mt19937_64 rng(seed);
    std::vector<double> enc(chip.num_encoding);
    std::vector<double> theta(chip.num_trainable);
    const int probes = options.probe == GradProbe::FirstSlot ? 1 : chip.num_trainable;
    std::vector<RunningStats> stats(probes);
    for (int s = 0; s < num_samples; ++s) {
        fill_uniform_angles(enc, rng);
        fill_uniform_angles(theta, rng);
        const CircuitGradient g = circuit_gradient(chip, enc, theta, GradMethod::Adjoint);
        const double dl_df = 2.0 * (g.value - options.target);
        for (int p = 0; p < probes; ++p) stats[p].add(dl_df * g.d_theta[p]);
    }
    double v = 0.0;
    for (const auto& st : stats) v += st.variance();
    return v / probes;
}

double quantum_error(double val_loss_noisy, double val_loss_ideal) {
    return std::abs(val_loss_noisy - val_loss_ideal);
}

ErrorDecomposition error_decomposition(const CircuitSpec& circuit, std::span<const double> enc,
                                       std::span<const double> theta, const NoiseModel& noise,
                                       std::uint64_t n_cir) {
    require(n_cir >= 1, ErrorCode::InvalidArgument, "shot count must be at least 1");
    ErrorDecomposition d;
    d.n_cir = n_cir;
    d.noisy = circuit_expectation(circuit, enc, theta, Backend::noisy(noise));
    d.ideal = circuit_expectation(circuit, enc, theta, Backend::ideal());
    const double bias = d.noisy - d.ideal;
    d.bias_sq = bias * bias;
    // Z^2 = I, so Tr[Z^2 rho] = 1.
    d.variance = (1.0 - d.noisy * d.noisy) / static_cast<double>(n_cir);
    d.mse = d.bias_sq + d.variance;
    return d;
}

EnsembleErrorDecomposition ensemble_error_decomposition(const CircuitSpec& chip,
                                                        const std::vector<std::vector<double>>& encs,
                                                        const std::vector<std::vector<double>>& thetas,
                                                        const NoiseModel& noise, std::uint64_t n_cir) {
    require(!encs.empty() && encs.size() == thetas.size(), ErrorCode::DimensionMismatch,
            "need one encoding and theta vector per chip");
    EnsembleErrorDecomposition out;
    const double k = static_cast<double>(encs.size());
    double bias_mean = 0.0;
    for (std::size_t c = 0; c < encs.size(); ++c) {
        out.per_chip.push_back(error_decomposition(chip, encs[c], thetas[c], noise, n_cir));
        const auto& d = out.per_chip.back();
        out.summed_bias_sq += d.bias_sq;
        bias_mean += (d.noisy - d.ideal) / k;
        out.aggregate_variance += d.variance / (k * k);
    }
    out.aggregate_bias_sq = bias_mean * bias_mean;
    return out;
}

void RunningStats::add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

double RunningStats::variance() const {
    return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

double generalization_error(double test_loss, double final_train_loss) {
    return test_loss - final_train_loss;
}

void write_metric_csv(std::ostream& os, const std::vector<MetricRow>& rows) {
    os << "metric,n,k,l,S,seed,value\n";
    const auto old = os.precision(17);
    for (const auto& r : rows) {
        os << r.metric << ',' << r.n << ',' << r.k << ',' << r.l << ',' << r.samples << ',' << r.seed << ','
           << r.value << '\n';
    }
    os.precision(old);
}

}  // namespace mcvqc
