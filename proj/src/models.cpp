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

#include "mcvqc/models.hpp"

#include <numbers>
#include <random>

#include "mcvqc/error.hpp"
#include "mcvqc/rng.hpp"

namespace mcvqc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<std::vector<double>> random_thetas(int k, int count, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(0.0, kTwoPi);
    std::vector<std::vector<double>> thetas(k, std::vector<double>(count));
    for (auto& t : thetas) {
        for (auto& v : t) v = dist(rng);
    }
    return thetas;
}

void check_depth(int depth) {
    require(depth >= 1, ErrorCode::InvalidArgument, "circuit depth must be >= 1");
}

}  // namespace

CircuitSpec hardware_efficient_chip(int num_qubits, int depth) {
    check_depth(depth);
    CircuitSpec c = make_ry_encoding_circuit(num_qubits);
    int slot = 0;
    for (int layer = 0; layer < depth; ++layer) {
        for (int w = 0; w < num_qubits; ++w) {
            c.trainable_ops.push_back(GateOp::single(GateKind::RX, w, slot++));
            c.trainable_ops.push_back(GateOp::single(GateKind::RY, w, slot++));
            c.trainable_ops.push_back(GateOp::single(GateKind::RZ, w, slot++));
        }
        if (num_qubits < 2) continue;
        for (int w = 0; w < num_qubits; ++w) {
            c.trainable_ops.push_back(GateOp::two(GateKind::CRX, w, (w + 1) % num_qubits, slot++));
        }
    }
    c.num_trainable = slot;
    c.observables = {0};
    c.validate();
    return c;
}

std::size_t hardware_efficient_param_count(int num_qubits, int depth) {
    const int per_wire = num_qubits >= 2 ? 4 : 3;
    return static_cast<std::size_t>(depth) * per_wire * num_qubits;
}

std::size_t qcnn_param_formula(int n, int d) {
    return static_cast<std::size_t>(18 * d * n + 3 * d * (n / 2) + n);
}

QcnnSpec build_qcnn_chip(int n, int depth) {
    check_depth(depth);
    require(n >= 2 && n % (1 << depth) == 0, ErrorCode::InvalidArgument,
            "QCNN width " + std::to_string(n) + " must be divisible by 2^" + std::to_string(depth));
    QcnnSpec spec;
    spec.num_qubits = n;
    spec.depth = depth;
    CircuitSpec& c = spec.circuit;
    c = make_ry_encoding_circuit(n);

    int slot = 0;
    std::vector<int> active(n);
    for (int w = 0; w < n; ++w) active[w] = w;
    spec.active_wires_per_stage.push_back(n);

    for (int layer = 0; layer < depth; ++layer) {
        const int w = static_cast<int>(active.size());
        std::vector<std::pair<int, int>> pairs;
        if (w == 2) {
            pairs.emplace_back(active[0], active[1]);
        } else {
            for (int i = 0; i < w; ++i) pairs.emplace_back(active[i], active[(i + 1) % w]);
        }
        const int sweeps = 2 * n / static_cast<int>(pairs.size());
        for (int s = 0; s < sweeps; ++s) {
            for (auto [a, b] : pairs) {
                c.trainable_ops.push_back(GateOp::u3(a, slot));
                slot += 3;
                c.trainable_ops.push_back(GateOp::two(GateKind::IsingZZ, a, b, slot++));
                c.trainable_ops.push_back(GateOp::two(GateKind::IsingYY, a, b, slot++));
                c.trainable_ops.push_back(GateOp::two(GateKind::IsingXX, a, b, slot++));
                c.trainable_ops.push_back(GateOp::u3(b, slot));
                slot += 3;
            }
        }
        std::vector<int> kept;
        for (int i = 0; i < w; i += 2) kept.push_back(active[i]);
        const int per_partner = n / w;
        for (int partner : kept) {
            for (int r = 0; r < per_partner; ++r) {
                c.trainable_ops.push_back(GateOp::u3(partner, slot));
                slot += 3;
            }
        }
        active = std::move(kept);
        spec.active_wires_per_stage.push_back(static_cast<int>(active.size()));
    }

    const int per_wire = n / static_cast<int>(active.size());
    for (int wire : active) {
        for (int r = 0; r < per_wire; ++r) {
            c.trainable_ops.push_back(GateOp::single(r % 2 == 0 ? GateKind::RY : GateKind::RX, wire, slot++));
        }
    }
    c.num_trainable = slot;
    spec.readout_wire = active.front();
    c.observables = {spec.readout_wire};
    c.validate();
    spec.param_count = static_cast<std::size_t>(slot);
    require(spec.param_count == qcnn_param_formula(n, depth), ErrorCode::InvalidArgument,
            "QCNN parameter count does not match 18dn + 3d(n/2) + n");
    return spec;
}

EnsembleModel build_multichip_ae_reduced(int input_dim, int n_total, int k, int depth, std::uint64_t seed) {
    require(input_dim >= 1, ErrorCode::InvalidArgument, "input_dim must be >= 1");
    require(k >= 1 && n_total >= k && n_total % k == 0, ErrorCode::InvalidArgument,
            "total qubits " + std::to_string(n_total) + " not divisible by " + std::to_string(k) + " chips");
    const int l = n_total / k;
    std::mt19937_64 rng(derive_seed(seed, 0));
    EnsembleModel m;
    m.label = "multichip_ae_reduced";
    m.seed = seed;
    m.input_dim_ = input_dim;
    m.padded_dim = input_dim;
    m.encoder_kind = EncoderKind::Shared;
    m.encoders.push_back(LinearLayer::uniform_init(input_dim, n_total, rng));
    m.partition = Partition::shuffled(k, l, derive_seed(seed, 1));
    m.chip = hardware_efficient_chip(l, depth);
    m.thetas = random_thetas(k, m.chip.num_trainable, rng);
    m.angle_scale = 1.0;
    m.aggregator.kind = Aggregator::LinearMap;
    m.aggregator.map = LinearLayer::uniform_init(k, input_dim, rng);
    m.validate();
    return m;
}

EnsembleModel build_single_chip_ae(int input_dim, int n_qubits, int depth, std::uint64_t seed) {
    EnsembleModel m = build_multichip_ae_reduced(input_dim, n_qubits, 1, depth, seed);
    m.label = "single_chip_ae";
    return m;
}

EnsembleModel build_multichip_ae_full(int input_dim, int chip_width, int depth, std::uint64_t seed) {
    require(input_dim >= 1 && chip_width >= 1, ErrorCode::InvalidArgument, "dims must be >= 1");
    const int padded = (input_dim + chip_width - 1) / chip_width * chip_width;
    const int k = padded / chip_width;
    std::mt19937_64 rng(derive_seed(seed, 0));
    EnsembleModel m;
    m.label = "multichip_ae_full";
    m.seed = seed;
    m.input_dim_ = input_dim;
    m.padded_dim = padded;
    m.encoder_kind = EncoderKind::None;
    m.partition = Partition::shuffled(k, chip_width, derive_seed(seed, 1));
    m.chip = hardware_efficient_chip(chip_width, depth);
    m.thetas = random_thetas(k, m.chip.num_trainable, rng);
    m.angle_scale = std::numbers::pi;
    m.aggregator.kind = Aggregator::LinearMap;
    m.aggregator.map = LinearLayer::uniform_init(k, input_dim, rng);
    m.validate();
    return m;
}

EnsembleModel build_qcnn(int num_qubits, int depth, int k, int input_dim, int num_classes,
                         std::uint64_t seed) {
    require(k >= 1 && input_dim >= 1 && num_classes >= 2, ErrorCode::InvalidArgument,
            "QCNN needs k >= 1, input_dim >= 1, num_classes >= 2");
    const QcnnSpec spec = build_qcnn_chip(num_qubits, depth);
    const int padded = (input_dim + k - 1) / k * k;
    const int block = padded / k;
    std::mt19937_64 rng(derive_seed(seed, 0));
    EnsembleModel m;
    m.label = "qcnn";
    m.seed = seed;
    m.input_dim_ = input_dim;
    m.padded_dim = padded;
    m.encoder_kind = EncoderKind::PerChip;
    for (int c = 0; c < k; ++c) m.encoders.push_back(LinearLayer::uniform_init(block, num_qubits, rng));
    m.partition = Partition::shuffled(k, block, derive_seed(seed, 1));
    m.chip = spec.circuit;
    m.thetas = random_thetas(k, m.chip.num_trainable, rng);
    m.angle_scale = 1.0;
    m.aggregator.kind = Aggregator::Mean;
    m.head = LinearLayer::uniform_init(1, num_classes, rng);
    m.validate();
    return m;
}

// ------------------------------------------------------------- ClassicalModel

ClassicalModel build_classical_ae(int input_dim, int n_qubits, int depth, int k, std::uint64_t seed) {
    check_depth(depth);
    std::mt19937_64 rng(derive_seed(seed, 0));
    ClassicalModel m;
    m.layers.push_back(LinearLayer::uniform_init(input_dim, n_qubits, rng));
    if (depth == 1) {
        m.layers.push_back(LinearLayer::uniform_init(n_qubits, k, rng));
    } else {
        m.layers.push_back(LinearLayer::uniform_init(n_qubits, 32, rng));
        for (int i = 0; i < depth - 2; ++i) m.layers.push_back(LinearLayer::uniform_init(32, 32, rng));
        m.layers.push_back(LinearLayer::uniform_init(32, k, rng));
    }
    m.layers.push_back(LinearLayer::uniform_init(k, input_dim, rng));
    return m;
}

std::size_t ClassicalModel::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.parameter_count();
    return n;
}

std::vector<double> ClassicalModel::parameters() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    for (const auto& l : layers) {
        out.insert(out.end(), l.weights.begin(), l.weights.end());
        out.insert(out.end(), l.bias.begin(), l.bias.end());
    }
    return out;
}

void ClassicalModel::set_parameters(std::span<const double> params) {
    require(params.size() == parameter_count(), ErrorCode::DimensionMismatch,
            "parameter vector length does not match classical model");
    for (auto& l : layers) {
        std::copy_n(params.begin(), l.weights.size(), l.weights.begin());
        params = params.subspan(l.weights.size());
        std::copy_n(params.begin(), l.bias.size(), l.bias.begin());
        params = params.subspan(l.bias.size());
    }
}

std::unique_ptr<TrainableModel> ClassicalModel::clone() const {
    return std::make_unique<ClassicalModel>(*this);
}

std::vector<double> ClassicalModel::predict(std::span<const double> x, const Backend&) const {
    std::vector<double> a(x.begin(), x.end());
    for (const auto& l : layers) a = l.forward(a);
    return a;
}

double ClassicalModel::accumulate_gradient(std::span<const double> x, std::span<const double> target,
                                           LossKind loss, std::span<double> grad,
                                           const GradientOptions&) const {
    std::vector<std::vector<double>> acts;
    acts.emplace_back(x.begin(), x.end());
    for (const auto& l : layers) acts.push_back(l.forward(acts.back()));
    const LossValue lv = evaluate_loss(loss, acts.back(), target);
    std::vector<std::size_t> offsets;
    std::size_t off = 0;
    for (const auto& l : layers) {
        offsets.push_back(off);
        off += l.parameter_count();
    }
    std::vector<double> g = lv.grad;
    for (std::size_t i = layers.size(); i-- > 0;) {
        g = layers[i].backward(acts[i], g, grad.subspan(offsets[i]));
    }
    return lv.loss;
}

}  // namespace mcvqc
