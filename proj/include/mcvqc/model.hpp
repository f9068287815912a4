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

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mcvqc/backend.hpp"
#include "mcvqc/gradients.hpp"

namespace mcvqc {

enum class LossKind { Mse, CrossEntropy };

const char* to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& name);

struct LossValue {
    double loss = 0.0;
    std::vector<double> grad;  // dL/d(output)
};

/// MSE averages over output dimensions. Cross-entropy applies a softmax to
/// the logits; `target` is either a single class index or a one-hot row.
LossValue evaluate_loss(LossKind kind, std::span<const double> output, std::span<const double> target);

/// Common surface for everything the trainer can optimize.
class TrainableModel {
public:
    virtual ~TrainableModel() = default;

    virtual std::string kind() const = 0;
    virtual int input_dim() const = 0;
    virtual int output_dim() const = 0;
    virtual std::size_t parameter_count() const = 0;
    virtual std::vector<double> parameters() const = 0;
    virtual void set_parameters(std::span<const double> params) = 0;
    virtual std::unique_ptr<TrainableModel> clone() const = 0;

    virtual std::vector<double> predict(std::span<const double> x, const Backend& backend) const = 0;

    /// Returns the sample loss and adds its parameter gradient into `grad`.
    virtual double accumulate_gradient(std::span<const double> x, std::span<const double> target,
                                       LossKind loss, std::span<double> grad,
                                       const GradientOptions& options) const = 0;
};

}  // namespace mcvqc
