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

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "mcvqc/config.hpp"
#include "mcvqc/metrics.hpp"
#include "mcvqc/train.hpp"

namespace mcvqc {

enum class ExperimentKind { Performance, Generalization, BarrenPlateau, NoiseResilience };

const char* to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

struct ExperimentRow {
    std::string model;
    int epoch = 0;  // 0 for end-of-run values
    std::string metric;
    double value = 0.0;
};

/// Rejects rows with empty or comma-bearing names, negative epochs, or non-finite values.
void validate_rows(const std::vector<ExperimentRow>& rows);
void write_experiment_csv(std::ostream& os, const std::vector<ExperimentRow>& rows);

struct ExperimentResult {
    ExperimentKind kind = ExperimentKind::Performance;
    std::vector<RunRecord> runs;
    std::vector<ExperimentRow> rows;       // training-curve experiments
    std::vector<MetricRow> metric_rows;    // barren_plateau
    std::filesystem::path csv_path;
};

/// Classical mirror, single chip, reduced 2- and 4-chip, and the full-dimensional ensemble.
std::vector<ModelConfig> standard_model_set(const ModelConfig& base);

ExperimentResult run_experiment(ExperimentKind kind, const TrainConfig& cfg);

/// Same as above with a caller-supplied dataset (must already be split).
ExperimentResult run_experiment(ExperimentKind kind, const TrainConfig& cfg, const Dataset& ds);

}  // namespace mcvqc
