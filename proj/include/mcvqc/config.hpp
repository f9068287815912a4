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

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mcvqc/backend.hpp"
#include "mcvqc/data.hpp"
#include "mcvqc/gradients.hpp"
#include "mcvqc/mitigation.hpp"
#include "mcvqc/model.hpp"
#include "json.hpp"

namespace mcvqc {

using Json = nlohmann::json;

struct ModelConfig {
    std::string name;  // display name; defaults to `kind`
    std::string kind = "single_chip_ae";
    int n_qubits = 8;    // total qubits (AE) or qubits per chip (qcnn)
    int chips = 1;
    int chip_width = 8;  // multichip_ae_full only
    int depth = 2;
    int num_classes = 10;

    std::string display_name() const { return name.empty() ? kind : name; }
};

struct DataConfig {
    /// digits | mnist | blobs | spatiotemporal | csv
    std::string source = "digits";
    std::size_t n_samples = 2500;
    std::array<double, 3> fractions{0.8, 0.1, 0.1};
    std::string idx_images;
    std::string idx_labels;
    bool downsample = true;
    bool allow_synthetic_fallback = false;
    std::string csv_path;
    std::string target_column = "label";
    std::size_t dim = 16;
    int classes = 2;
    std::size_t channels = 8;
    std::size_t timesteps = 6;
};

struct AdamConfig {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps_hat = 1e-8;
};

struct Seeds {
    std::uint64_t model = 1;
    std::uint64_t data = 2;
    std::uint64_t sampling = 3;
};

struct BackendConfig {
    std::string kind = "ideal";  // ideal | noisy
    double eps = 0.0;
    double gamma = 0.0;
    std::uint64_t n_cir = 0;  // 0 = exact expectations
};

struct ExperimentConfig {
    std::vector<ModelConfig> models;  // empty = the standard comparison set
    std::vector<int> ks{1, 2, 4};
    int samples = 1000;
    std::size_t eval_samples = 20;
    std::vector<std::string> zne_models{"single_chip_ae"};
};

struct TrainConfig {
    ModelConfig model;
    DataConfig data;
    AdamConfig optimizer;
    int epochs = 30;
    std::size_t batch_size = 32;
    std::optional<LossKind> loss;  // default follows the model kind
    Seeds seeds;
    BackendConfig backend;
    bool train_under_noise = false;
    GradMethod gradient = GradMethod::Adjoint;
    std::optional<ZneConfig> zne;
    std::string output_dir = "runs";
    ExperimentConfig experiment;

    void validate() const;
    LossKind resolved_loss() const;
    Backend eval_backend() const;
    Backend train_backend() const;
};

TrainConfig parse_config(const Json& j);
TrainConfig load_config(const std::filesystem::path& path);
Json to_json(const TrainConfig& cfg);
Json to_json(const ModelConfig& m);
ModelConfig parse_model_config(const Json& j);
ZneConfig parse_zne_config(const Json& j);
Json to_json(const ZneConfig& z);

/// FNV-1a over the canonical JSON dump.
std::uint64_t config_hash(const TrainConfig& cfg);

bool is_classification(const ModelConfig& m);

std::unique_ptr<TrainableModel> build_model(const ModelConfig& m, int input_dim, std::uint64_t seed);

/// Loads, prepares and splits the configured dataset.
Dataset load_dataset(const DataConfig& data, bool classification, std::uint64_t seed);

}  // namespace mcvqc
