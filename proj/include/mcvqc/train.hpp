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
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcvqc/config.hpp"
#include "mcvqc/data.hpp"
#include "mcvqc/metrics.hpp"
#include "mcvqc/model.hpp"

namespace mcvqc {

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t t = 0;

    explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, const AdamConfig& cfg);

/// Mean per-sample loss over `rows` (all rows when empty).
double mean_loss(const TrainableModel& model, const Dataset& ds, std::span<const std::size_t> rows, LossKind loss,
                 const Backend& backend);

struct Checkpoint {
    static constexpr int kVersion = 1;
    int version = kVersion;
    std::string model_kind;
    int input_dim = 0;
    Json config;
    std::uint64_t config_hash = 0;
    int epochs_completed = 0;
    std::vector<double> parameters;
    std::vector<int> permutation;  // empty for classical models
    AdamState adam;
    std::vector<MetricsRecord> history;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);
Json to_json(const MetricsRecord& r);
MetricsRecord metrics_record_from_json(const Json& j);

struct RunSummary {
    double final_train_loss = 0.0;  // full pass over the train split with final parameters
    double final_val_loss = 0.0;
    double test_loss = 0.0;
    double gen_error = 0.0;
};

struct RunRecord {
    Json config;
    std::string model_name;
    std::vector<MetricsRecord> epochs;
    RunSummary summary;
    bool stopped_early = false;
    double wall_clock_s = 0.0;
    std::filesystem::path checkpoint_path;
    std::filesystem::path log_path;
    std::shared_ptr<TrainableModel> model;
};

struct TrainHooks {
    /// Called after each epoch's losses are recorded, before logging.
    std::function<void(int epoch, const TrainableModel&, MetricsRecord&)> on_epoch;
    std::optional<std::filesystem::path> resume_from;
    /// Stop after this many completed epochs (simulates an interrupted run).
    std::optional<int> stop_after;
    /// Write checkpoint and log files under cfg.output_dir.
    bool write_artifacts = true;
};

RunRecord train(const TrainConfig& cfg, const Dataset& ds, const TrainHooks& hooks = {});

/// Rebuilds the model a checkpoint was taken from.
std::unique_ptr<TrainableModel> restore_model(const Checkpoint& ckpt);

}  // namespace mcvqc
