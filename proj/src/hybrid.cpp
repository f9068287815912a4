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

#include <algorithm>

#include "mcvqc/ensemble.hpp"
#include "mcvqc/error.hpp"
#include "mcvqc/gradients.hpp"

namespace mcvqc {

std::vector<double> hybrid_backward(const EnsembleModel& model, const ForwardResult& forward,
                                    std::span<const double> loss_grad, const GradientOptions& options) {
    require(forward.valid, ErrorCode::StaleCache, "backward pass without a forward pass");
    require(forward.param_hash == model.parameter_hash(), ErrorCode::StaleCache,
            "forward cache was computed with different model parameters");
    require(static_cast<int>(loss_grad.size()) == model.output_dim(), ErrorCode::DimensionMismatch,
            "loss gradient has " + std::to_string(loss_grad.size()) + " entries, model output has " +
                std::to_string(model.output_dim()));

    const int k = model.num_chips();
    std::vector<double> grad(model.parameter_count(), 0.0);

    // Offsets into the flattened layout.
    std::size_t enc_size = 0;
    for (const auto& e : model.encoders) enc_size += e.parameter_count();
    const std::size_t theta_offset = enc_size;
    const std::size_t agg_offset = theta_offset + static_cast<std::size_t>(k) * model.chip.num_trainable;
    const std::size_t head_offset = agg_offset + model.aggregator.parameter_count();

    std::vector<double> g_agg(loss_grad.begin(), loss_grad.end());
    if (model.head) {
        g_agg = model.head->backward(forward.aggregated, loss_grad,
                                     std::span<double>(grad).subspan(head_offset));
    }

    std::vector<double> g_chip(k, 0.0);
    switch (model.aggregator.kind) {
        case Aggregator::Mean:
            std::fill(g_chip.begin(), g_chip.end(), g_agg[0] / k);
            break;
        case Aggregator::WeightedSum:
            for (int c = 0; c < k; ++c) {
                g_chip[c] = model.aggregator.weights[c] * g_agg[0];
                grad[agg_offset + c] += forward.chip_outputs[c] * g_agg[0];
            }
            break;
        case Aggregator::LinearMap:
            g_chip = model.aggregator.map.backward(forward.chip_outputs, g_agg,
                                                   std::span<double>(grad).subspan(agg_offset));
            break;
    }

    std::vector<std::vector<double>> g_blocks(k);
    for (int c = 0; c < k; ++c) {
        const std::size_t width = forward.blocks[c].size();
        g_blocks[c].assign(width, 0.0);
        if (g_chip[c] == 0.0) continue;
        const CircuitGradient cg = circuit_gradient(model.chip, forward.chip_angles[c], model.thetas[c],
                                                    options.method, options.backend);
        double* theta_grad = grad.data() + theta_offset + static_cast<std::size_t>(c) * model.chip.num_trainable;
        for (int s = 0; s < model.chip.num_trainable; ++s) theta_grad[s] += g_chip[c] * cg.d_theta[s];
        if (model.encoder_kind == EncoderKind::None) continue;
        // Encoding angles are RY rotation angles, chained back through the encoder.
        std::vector<double> g_angles(cg.d_enc.size());
        for (std::size_t j = 0; j < g_angles.size(); ++j) {
            g_angles[j] = g_chip[c] * cg.d_enc[j] * model.angle_scale;
        }
        if (model.encoder_kind == EncoderKind::PerChip) {
            std::size_t offset = 0;
            for (int e = 0; e < c; ++e) offset += model.encoders[e].parameter_count();
            model.encoders[c].backward(forward.blocks[c], g_angles, std::span<double>(grad).subspan(offset));
        } else {
            g_blocks[c] = std::move(g_angles);
        }
    }

    if (model.encoder_kind == EncoderKind::Shared) {
        const std::vector<double> g_encoded = merge_partitions(g_blocks, model.partition);
        model.encoders[0].backward(forward.input, g_encoded, std::span<double>(grad).subspan(0));
    }
    return grad;
}

}  // namespace mcvqc
