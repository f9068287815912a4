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

#include "mcvqc/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "mcvqc/error.hpp"

namespace mcvqc {

namespace {

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

void append(std::vector<double>& out, const std::vector<double>& v) {
    out.insert(out.end(), v.begin(), v.end());
}

void take(std::span<const double>& src, std::vector<double>& dst) {
    std::copy_n(src.begin(), dst.size(), dst.begin());
    src = src.subspan(dst.size());
}

}  // namespace

// ---------------------------------------------------------------- LinearLayer

LinearLayer::LinearLayer(int in, int out)
    : in_dim(in), out_dim(out), weights(static_cast<std::size_t>(in) * out, 0.0), bias(out, 0.0) {
    require(in >= 1 && out >= 1, ErrorCode::InvalidArgument, "linear layer dims must be >= 1");
}

LinearLayer LinearLayer::uniform_init(int in, int out, std::mt19937_64& rng) {
    LinearLayer layer(in, out);
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (auto& w : layer.weights) w = dist(rng);
    for (auto& b : layer.bias) b = dist(rng);
    return layer;
}

LinearLayer LinearLayer::identity(int dim) {
    LinearLayer layer(dim, dim);
    for (int i = 0; i < dim; ++i) layer.weights[static_cast<std::size_t>(i) * dim + i] = 1.0;
    return layer;
}

void LinearLayer::validate() const {
    require(in_dim >= 1 && out_dim >= 1, ErrorCode::InvalidArgument, "linear layer dims must be >= 1");
    require(weights.size() == static_cast<std::size_t>(in_dim) * out_dim && bias.size() ==
                static_cast<std::size_t>(out_dim),
            ErrorCode::DimensionMismatch, "linear layer storage does not match its dims");
    auto finite = [](double v) { return std::isfinite(v); };
    require(std::all_of(weights.begin(), weights.end(), finite) &&
                std::all_of(bias.begin(), bias.end(), finite),
            ErrorCode::NonFinite, "linear layer has non-finite entries");
}

std::vector<double> LinearLayer::forward(std::span<const double> x) const {
    require(static_cast<int>(x.size()) == in_dim, ErrorCode::DimensionMismatch,
            "linear layer expects " + std::to_string(in_dim) + " inputs, got " + std::to_string(x.size()));
    std::vector<double> y(bias);
    for (int o = 0; o < out_dim; ++o) {
        const double* row = weights.data() + static_cast<std::size_t>(o) * in_dim;
        double s = 0.0;
        for (int i = 0; i < in_dim; ++i) s += row[i] * x[i];
        y[o] += s;
    }
    return y;
}

std::vector<double> LinearLayer::backward(std::span<const double> x, std::span<const double> grad_out,
                                          std::span<double> grad) const {
    std::vector<double> grad_in(in_dim, 0.0);
    for (int o = 0; o < out_dim; ++o) {
        const double g = grad_out[o];
        if (g == 0.0) continue;
        const std::size_t row = static_cast<std::size_t>(o) * in_dim;
        for (int i = 0; i < in_dim; ++i) {
            grad[row + i] += g * x[i];
            grad_in[i] += g * weights[row + i];
        }
        grad[weights.size() + o] += g;
    }
    return grad_in;
}

// ------------------------------------------------------------------ Partition

Partition Partition::identity(int num_chips, int block_width) {
    Partition p;
    p.num_chips = num_chips;
    p.block_width = block_width;
    p.permutation.resize(static_cast<std::size_t>(num_chips) * block_width);
    std::iota(p.permutation.begin(), p.permutation.end(), 0);
    p.validate();
    return p;
}

Partition Partition::shuffled(int num_chips, int block_width, std::uint64_t seed) {
    Partition p = identity(num_chips, block_width);
    std::mt19937_64 rng(seed);
    std::shuffle(p.permutation.begin(), p.permutation.end(), rng);
    return p;
}

void Partition::validate() const {
    require(num_chips >= 1 && block_width >= 1, ErrorCode::InvalidArgument,
            "partition needs at least one chip of width >= 1");
    require(permutation.size() == static_cast<std::size_t>(size()), ErrorCode::DimensionMismatch,
            "permutation length " + std::to_string(permutation.size()) + " != k*l = " +
                std::to_string(size()));
    std::vector<char> seen(permutation.size(), 0);
    for (int v : permutation) {
        require(v >= 0 && v < size() && !seen[v], ErrorCode::InvalidArgument,
                "partition permutation is not a bijection");
        seen[v] = 1;
    }
}

std::vector<std::vector<double>> partition_features(std::span<const double> x, const Partition& p) {
    require(static_cast<int>(x.size()) == p.size(), ErrorCode::DimensionMismatch,
            "partition expects " + std::to_string(p.size()) + " features, got " + std::to_string(x.size()));
    std::vector<std::vector<double>> blocks(p.num_chips, std::vector<double>(p.block_width));
    for (int pos = 0; pos < p.size(); ++pos) {
        blocks[pos / p.block_width][pos % p.block_width] = x[p.permutation[pos]];
    }
    return blocks;
}

std::vector<double> merge_partitions(const std::vector<std::vector<double>>& blocks, const Partition& p) {
    require(static_cast<int>(blocks.size()) == p.num_chips, ErrorCode::DimensionMismatch,
            "block count does not match partition");
    std::vector<double> x(p.size());
    for (int pos = 0; pos < p.size(); ++pos) {
        x[p.permutation[pos]] = blocks[pos / p.block_width].at(pos % p.block_width);
    }
    return x;
}

// ----------------------------------------------------------------- Aggregator

const char* to_string(Aggregator kind) {
    switch (kind) {
        case Aggregator::Mean: return "mean";
        case Aggregator::WeightedSum: return "weighted_sum";
        case Aggregator::LinearMap: return "linear_map";
    }
    return "?";
}

Aggregator aggregator_from_string(const std::string& name) {
    if (name == "mean") return Aggregator::Mean;
    if (name == "weighted_sum") return Aggregator::WeightedSum;
    if (name == "linear_map") return Aggregator::LinearMap;
    fail(ErrorCode::Format, "unknown aggregator '" + name + "'");
}

std::size_t AggregatorSpec::parameter_count() const {
    switch (kind) {
        case Aggregator::Mean: return 0;
        case Aggregator::WeightedSum: return weights.size();
        case Aggregator::LinearMap: return map.parameter_count();
    }
    return 0;
}

int AggregatorSpec::output_dim() const { return kind == Aggregator::LinearMap ? map.out_dim : 1; }

std::vector<double> aggregate(std::span<const double> outputs, const AggregatorSpec& spec) {
    switch (spec.kind) {
        case Aggregator::Mean: {
            require(!outputs.empty(), ErrorCode::DimensionMismatch, "mean of zero chip outputs");
            double s = 0.0;
            for (double v : outputs) s += v;
            return {s / static_cast<double>(outputs.size())};
        }
        case Aggregator::WeightedSum: {
            require(spec.weights.size() == outputs.size(), ErrorCode::DimensionMismatch,
                    "weighted sum has " + std::to_string(spec.weights.size()) + " weights for " +
                        std::to_string(outputs.size()) + " outputs");
            double s = 0.0;
            for (std::size_t i = 0; i < outputs.size(); ++i) s += spec.weights[i] * outputs[i];
            return {s};
        }
        case Aggregator::LinearMap: return spec.map.forward(outputs);
    }
    return {};
}

const char* to_string(EncoderKind kind) {
    switch (kind) {
        case EncoderKind::None: return "none";
        case EncoderKind::Shared: return "shared";
        case EncoderKind::PerChip: return "per_chip";
    }
    return "?";
}

EncoderKind encoder_kind_from_string(const std::string& name) {
    if (name == "none") return EncoderKind::None;
    if (name == "shared") return EncoderKind::Shared;
    if (name == "per_chip") return EncoderKind::PerChip;
    fail(ErrorCode::Format, "unknown encoder kind '" + name + "'");
}

// -------------------------------------------------------------- EnsembleModel

void EnsembleModel::validate() const {
    partition.validate();
    chip.validate();
    const int k = num_chips();
    const int l = chip.num_qubits;
    require(chip.num_encoding == l, ErrorCode::InvalidArgument,
            "chip must take one encoding angle per wire");
    require(static_cast<int>(thetas.size()) == k, ErrorCode::DimensionMismatch,
            "expected one theta block per chip");
    for (const auto& t : thetas) {
        require(static_cast<int>(t.size()) == chip.num_trainable, ErrorCode::DimensionMismatch,
                "theta block length does not match the chip's slot count");
    }
    require(input_dim_ >= 1 && padded_dim >= input_dim_, ErrorCode::InvalidArgument,
            "bad input/padded dims");
    switch (encoder_kind) {
        case EncoderKind::None:
            require(encoders.empty() && partition.block_width == l && partition.size() == padded_dim,
                    ErrorCode::DimensionMismatch, "raw-feature model must partition padded input into k*l");
            break;
        case EncoderKind::Shared:
            require(encoders.size() == 1 && encoders[0].in_dim == padded_dim &&
                        encoders[0].out_dim == partition.size() && partition.block_width == l,
                    ErrorCode::DimensionMismatch, "shared encoder must map input to k*l angles");
            break;
        case EncoderKind::PerChip:
            require(static_cast<int>(encoders.size()) == k && partition.size() == padded_dim,
                    ErrorCode::DimensionMismatch, "per-chip encoders need one layer per chip");
            for (const auto& e : encoders) {
                require(e.in_dim == partition.block_width && e.out_dim == l, ErrorCode::DimensionMismatch,
                        "per-chip encoder must map a feature block to l angles");
            }
            break;
    }
    for (const auto& e : encoders) e.validate();
    switch (aggregator.kind) {
        case Aggregator::Mean: break;
        case Aggregator::WeightedSum:
            require(static_cast<int>(aggregator.weights.size()) == k, ErrorCode::DimensionMismatch,
                    "weighted-sum arity must equal chip count");
            break;
        case Aggregator::LinearMap:
            aggregator.map.validate();
            require(aggregator.map.in_dim == k, ErrorCode::DimensionMismatch,
                    "decoder input arity must equal chip count");
            break;
    }
    if (head) {
        head->validate();
        require(head->in_dim == aggregator.output_dim(), ErrorCode::DimensionMismatch,
                "head input does not match aggregator output");
    }
}

int EnsembleModel::output_dim() const { return head ? head->out_dim : aggregator.output_dim(); }

std::size_t EnsembleModel::parameter_count() const {
    std::size_t n = 0;
    for (const auto& e : encoders) n += e.parameter_count();
    for (const auto& t : thetas) n += t.size();
    n += aggregator.parameter_count();
    if (head) n += head->parameter_count();
    return n;
}

std::vector<double> EnsembleModel::parameters() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    for (const auto& e : encoders) {
        append(out, e.weights);
        append(out, e.bias);
    }
    for (const auto& t : thetas) append(out, t);
    if (aggregator.kind == Aggregator::WeightedSum) append(out, aggregator.weights);
    if (aggregator.kind == Aggregator::LinearMap) {
        append(out, aggregator.map.weights);
        append(out, aggregator.map.bias);
    }
    if (head) {
        append(out, head->weights);
        append(out, head->bias);
    }
    return out;
}

void EnsembleModel::set_parameters(std::span<const double> params) {
    require(params.size() == parameter_count(), ErrorCode::DimensionMismatch,
            "parameter vector has " + std::to_string(params.size()) + " entries, model has " +
                std::to_string(parameter_count()));
    for (auto& e : encoders) {
        take(params, e.weights);
        take(params, e.bias);
    }
    for (auto& t : thetas) take(params, t);
    if (aggregator.kind == Aggregator::WeightedSum) take(params, aggregator.weights);
    if (aggregator.kind == Aggregator::LinearMap) {
        take(params, aggregator.map.weights);
        take(params, aggregator.map.bias);
    }
    if (head) {
        take(params, head->weights);
        take(params, head->bias);
    }
}

std::uint64_t EnsembleModel::parameter_hash() const {
    const auto p = parameters();
    return fnv1a(1469598103934665603ULL, p.data(), p.size() * sizeof(double));
}

std::unique_ptr<TrainableModel> EnsembleModel::clone() const {
    return std::make_unique<EnsembleModel>(*this);
}

std::vector<double> EnsembleModel::predict(std::span<const double> x, const Backend& backend) const {
    return forward_ensemble(*this, x, backend).final_output;
}

double EnsembleModel::accumulate_gradient(std::span<const double> x, std::span<const double> target,
                                          LossKind loss, std::span<double> grad,
                                          const GradientOptions& options) const {
    const ForwardResult fwd = forward_ensemble(*this, x, options.backend);
    const LossValue lv = evaluate_loss(loss, fwd.final_output, target);
    const auto g = hybrid_backward(*this, fwd, lv.grad, options);
    for (std::size_t i = 0; i < g.size(); ++i) grad[i] += g[i];
    return lv.loss;
}

// -------------------------------------------------------------------- forward

double forward_chip(const CircuitSpec& chip, std::span<const double> x_i,
                    std::span<const double> theta_i, const Backend& backend) {
    require(static_cast<int>(x_i.size()) == chip.num_qubits, ErrorCode::DimensionMismatch,
            "chip expects " + std::to_string(chip.num_qubits) + " encoding angles, got " +
                std::to_string(x_i.size()));
    return circuit_expectation(chip, x_i, theta_i, backend);
}

namespace {

// Shared by forward_ensemble and ensemble_product_state.
void compute_angles(const EnsembleModel& model, std::span<const double> x, ForwardResult& r) {
    require(static_cast<int>(x.size()) == model.input_dim(), ErrorCode::DimensionMismatch,
            "model expects " + std::to_string(model.input_dim()) + " inputs, got " +
                std::to_string(x.size()));
    r.input.assign(x.begin(), x.end());
    r.input.resize(model.padded_dim, 0.0);
    if (model.encoder_kind == EncoderKind::Shared) {
        r.encoded = model.encoders[0].forward(r.input);
        r.blocks = partition_features(r.encoded, model.partition);
    } else {
        r.blocks = partition_features(r.input, model.partition);
    }
    const int k = model.num_chips();
    r.chip_angles.resize(k);
    for (int c = 0; c < k; ++c) {
        std::vector<double> pre =
            model.encoder_kind == EncoderKind::PerChip ? model.encoders[c].forward(r.blocks[c]) : r.blocks[c];
        for (double& v : pre) v *= model.angle_scale;
        r.chip_angles[c] = std::move(pre);
    }
}

}  // namespace

ForwardResult forward_ensemble(const EnsembleModel& model, std::span<const double> x,
                               const Backend& backend) {
    ForwardResult r;
    compute_angles(model, x, r);
    const int k = model.num_chips();
    r.chip_outputs.resize(k);
    for (int c = 0; c < k; ++c) {
        r.chip_outputs[c] = forward_chip(model.chip, r.chip_angles[c], model.thetas[c], backend);
    }
    r.aggregated = aggregate(r.chip_outputs, model.aggregator);
    r.final_output = model.head ? model.head->forward(r.aggregated) : r.aggregated;
    r.param_hash = model.parameter_hash();
    r.valid = true;
    return r;
}

StateVector ensemble_product_state(const EnsembleModel& model, std::span<const double> x) {
    ForwardResult r;
    compute_angles(model, x, r);
    StateVector full = run_circuit(model.chip, r.chip_angles[0], model.thetas[0]);
    for (int c = 1; c < model.num_chips(); ++c) {
        full = tensor_product(full, run_circuit(model.chip, r.chip_angles[c], model.thetas[c]));
    }
    return full;
}

}  // namespace mcvqc
