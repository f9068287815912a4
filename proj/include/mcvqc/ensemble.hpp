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
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mcvqc/backend.hpp"
#include "mcvqc/circuit.hpp"
#include "mcvqc/model.hpp"

namespace mcvqc {

/// Dense affine map, weights stored row-major (out_dim x in_dim).
struct LinearLayer {
    int in_dim = 0;
    int out_dim = 0;
    std::vector<double> weights;
    std::vector<double> bias;

    LinearLayer() = default;
    LinearLayer(int in, int out);

    /// Weights and bias uniform in [-1/sqrt(in), 1/sqrt(in)].
    static LinearLayer uniform_init(int in, int out, std::mt19937_64& rng);
    static LinearLayer identity(int dim);

    void validate() const;
    std::size_t parameter_count() const { return weights.size() + bias.size(); }
    std::vector<double> forward(std::span<const double> x) const;
    /// Adds dL/dW and dL/db into `grad` (weights then bias) and returns dL/dx.
    std::vector<double> backward(std::span<const double> x, std::span<const double> grad_out,
                                 std::span<double> grad) const;
};

/// Fixed shuffle followed by a split into `num_chips` contiguous blocks.
/// Output position p takes input index permutation[p].
struct Partition {
    int num_chips = 1;
    int block_width = 1;
    std::vector<int> permutation;

    static Partition identity(int num_chips, int block_width);
    static Partition shuffled(int num_chips, int block_width, std::uint64_t seed);

    int size() const { return num_chips * block_width; }
    void validate() const;
};

std::vector<std::vector<double>> partition_features(std::span<const double> x, const Partition& p);

/// Inverse of partition_features.
std::vector<double> merge_partitions(const std::vector<std::vector<double>>& blocks, const Partition& p);

enum class Aggregator { Mean, WeightedSum, LinearMap };

const char* to_string(Aggregator kind);
Aggregator aggregator_from_string(const std::string& name);

struct AggregatorSpec {
    Aggregator kind = Aggregator::LinearMap;
    std::vector<double> weights;  // WeightedSum
    LinearLayer map;              // LinearMap

    std::size_t parameter_count() const;
    int output_dim() const;
};

std::vector<double> aggregate(std::span<const double> outputs, const AggregatorSpec& spec);

enum class EncoderKind {
    None,     // raw (zero-padded) features feed the partition
    Shared,   // one input_dim -> k*l layer before the partition
    PerChip,  // one block_width -> l layer per chip after the partition
};

const char* to_string(EncoderKind kind);
EncoderKind encoder_kind_from_string(const std::string& name);

/// Everything a backward pass needs from the forward pass of one sample.
struct ForwardResult {
    std::vector<double> final_output;
    std::vector<double> chip_outputs;

    std::vector<double> input;    // zero-padded input
    std::vector<double> encoded;  // shared encoder output (Shared only)
    std::vector<std::vector<double>> blocks;
    std::vector<std::vector<double>> chip_angles;
    std::vector<double> aggregated;
    std::uint64_t param_hash = 0;
    bool valid = false;
};

/// k identical-structure chips with independent theta blocks, optional
/// classical encoder, aggregator g and optional head layer.
///
/// Flattened parameter layout: encoder layers (weights, bias each), chip
/// theta blocks in chip order, aggregator parameters, head (weights, bias).
class EnsembleModel : public TrainableModel {
public:
    std::string label = "ensemble";
    int input_dim_ = 0;
    int padded_dim = 0;
    EncoderKind encoder_kind = EncoderKind::None;
    std::vector<LinearLayer> encoders;
    Partition partition;
    CircuitSpec chip;
    std::vector<std::vector<double>> thetas;
    /// Encoding angle = angle_scale * (encoder output or raw feature).
    double angle_scale = 1.0;
    AggregatorSpec aggregator;
    std::optional<LinearLayer> head;
    std::uint64_t seed = 0;

    int num_chips() const { return partition.num_chips; }
    void validate() const;

    std::string kind() const override { return label; }
    int input_dim() const override { return input_dim_; }
    int output_dim() const override;
    std::size_t parameter_count() const override;
    std::vector<double> parameters() const override;
    void set_parameters(std::span<const double> params) override;
    std::unique_ptr<TrainableModel> clone() const override;
    std::vector<double> predict(std::span<const double> x, const Backend& backend) const override;
    double accumulate_gradient(std::span<const double> x, std::span<const double> target, LossKind loss,
                               std::span<double> grad, const GradientOptions& options) const override;

    std::uint64_t parameter_hash() const;
};

/// f(x_i) = <Z> on the chip's readout wire after encoding angles x_i.
double forward_chip(const CircuitSpec& chip, std::span<const double> x_i,
                    std::span<const double> theta_i, const Backend& backend = Backend::ideal());

ForwardResult forward_ensemble(const EnsembleModel& model, std::span<const double> x,
                               const Backend& backend = Backend::ideal());

/// Product state of all chips (chip c on wires [c*l, (c+1)*l)).
StateVector ensemble_product_state(const EnsembleModel& model, std::span<const double> x);

}  // namespace mcvqc
