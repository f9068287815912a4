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
#include <memory>
#include <string>
#include <vector>

#include "mcvqc/ensemble.hpp"

namespace mcvqc {

/// RY encoding, then `depth` layers of {RX, RY, RZ on every wire; CRX ring
/// with wire i controlling wire (i + 1) mod l}. Readout Z on wire 0.
/// Trainable slots are laid out layer by layer, RX/RY/RZ per wire first, so
/// slot 0 is the first-layer RX on wire 0.
CircuitSpec hardware_efficient_chip(int num_qubits, int depth);

std::size_t hardware_efficient_param_count(int num_qubits, int depth);

/// Convolution/pooling circuit for one chip.
///
/// Convolution layer j acts on the active wires with the kernel
/// U3(a) IsingZZ IsingYY IsingXX U3(b) over every ring-neighbour pair (a, b)
/// and carries 18n parameters, spread over 2n / pairs repeated sweeps.
/// Pooling drops the wires at odd positions of the active list and applies
/// 3n/2 parameters of U3 to their even-position partners (2^j U3 per
/// partner). A readout stage spends n angles as alternating RY/RX rotations on
/// the surviving wires before Z is read on the first of them.
struct QcnnSpec {
    int num_qubits = 0;
    int depth = 0;
    std::size_t param_count = 0;
    std::vector<int> active_wires_per_stage;  // n, n/2, ..., n/2^d
    int readout_wire = 0;
    CircuitSpec circuit;
};

QcnnSpec build_qcnn_chip(int num_qubits, int depth);

/// 18dn + 3d(n/2) + n.
std::size_t qcnn_param_formula(int num_qubits, int depth);

/// Classical encoder input_dim -> n_qubits, one n_qubits-wide chip, decoder
/// 1 -> input_dim. Same construction as the reduced ensemble with k = 1.
EnsembleModel build_single_chip_ae(int input_dim, int n_qubits, int depth, std::uint64_t seed);

/// Encoder input_dim -> n_total, shuffle, k chips of n_total / k wires,
/// decoder k -> input_dim.
EnsembleModel build_multichip_ae_reduced(int input_dim, int n_total, int k, int depth, std::uint64_t seed);

/// No encoder: zero-pad input to a multiple of l, shuffle, k = padded / l
/// chips, decoder k -> input_dim. Features in [0, 1] are encoded as angles in
/// [0, pi].
EnsembleModel build_multichip_ae_full(int input_dim, int chip_width, int depth, std::uint64_t seed);

/// Features split over k chips, each with its own block -> n angle layer,
/// QCNN chip, outputs averaged, head 1 -> num_classes.
EnsembleModel build_qcnn(int num_qubits, int depth, int k, int input_dim, int num_classes,
                         std::uint64_t seed);

/// Purely linear mirror of the single-chip autoencoder:
/// input_dim -> n_qubits -> 32 -> ... -> k -> input_dim.
class ClassicalModel : public TrainableModel {
public:
    std::string label = "classical_ae";
    std::vector<LinearLayer> layers;

    std::string kind() const override { return label; }
    int input_dim() const override { return layers.front().in_dim; }
    int output_dim() const override { return layers.back().out_dim; }
    std::size_t parameter_count() const override;
    std::vector<double> parameters() const override;
    void set_parameters(std::span<const double> params) override;
    std::unique_ptr<TrainableModel> clone() const override;
    std::vector<double> predict(std::span<const double> x, const Backend& backend) const override;
    double accumulate_gradient(std::span<const double> x, std::span<const double> target, LossKind loss,
                               std::span<double> grad, const GradientOptions& options) const override;
};

/// `depth` hidden layers: depth 1 maps n_qubits -> k directly; otherwise
/// n_qubits -> 32, (depth - 2) x (32 -> 32), 32 -> k.
ClassicalModel build_classical_ae(int input_dim, int n_qubits, int depth, int k, std::uint64_t seed);

}  // namespace mcvqc
