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

#include "mcvqc/model.hpp"

#include <algorithm>
#include <cmath>

#include "mcvqc/error.hpp"

namespace mcvqc {

const char* to_string(LossKind kind) { return kind == LossKind::Mse ? "mse" : "cross_entropy"; }

LossKind loss_kind_from_string(const std::string& name) {
    if (name == "mse") return LossKind::Mse;
    if (name == "cross_entropy") return LossKind::CrossEntropy;
    fail(ErrorCode::Format, "unknown loss '" + name + "'");
}

LossValue evaluate_loss(LossKind kind, std::span<const double> output, std::span<const double> target) {
    LossValue lv;
    lv.grad.assign(output.size(), 0.0);
    if (kind == LossKind::Mse) {
        require(output.size() == target.size(), ErrorCode::DimensionMismatch,
                "MSE target has " + std::to_string(target.size()) + " entries, output has " +
                    std::to_string(output.size()));
        const double n = static_cast<double>(output.size());
        for (std::size_t i = 0; i < output.size(); ++i) {
            const double d = output[i] - target[i];
            lv.loss += d * d / n;
            lv.grad[i] = 2.0 * d / n;
        }
        return lv;
    }
    std::size_t label = 0;
    if (target.size() == 1) {
        label = static_cast<std::size_t>(std::llround(target[0]));
    } else {
        require(target.size() == output.size(), ErrorCode::DimensionMismatch,
                "one-hot target width does not match logits");
        label = static_cast<std::size_t>(std::max_element(target.begin(), target.end()) - target.begin());
    }
    require(label < output.size(), ErrorCode::InvalidArgument,
            "class index " + std::to_string(label) + " outside logits of width " +
                std::to_string(output.size()));
    const double m = *std::max_element(output.begin(), output.end());
    double z = 0.0;
    for (double v : output) z += std::exp(v - m);
    for (std::size_t i = 0; i < output.size(); ++i) lv.grad[i] = std::exp(output[i] - m) / z;
    lv.loss = -(output[label] - m - std::log(z));
    lv.grad[label] -= 1.0;
    return lv;
}

}  // namespace mcvqc
