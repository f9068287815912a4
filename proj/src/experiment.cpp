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

#include "mcvqc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "mcvqc/error.hpp"
#include "mcvqc/models.hpp"

namespace mcvqc {

const char* to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Performance: return "performance";
        case ExperimentKind::Generalization: return "generalization";
        case ExperimentKind::BarrenPlateau: return "barren_plateau";
        case ExperimentKind::NoiseResilience: return "noise_resilience";
    }
    return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
    for (auto k : {ExperimentKind::Performance, ExperimentKind::Generalization, ExperimentKind::BarrenPlateau,
                   ExperimentKind::NoiseResilience}) {
        if (name == to_string(k)) return k;
    }
    fail(ErrorCode::InvalidArgument, "unknown experiment kind '" + name + "'");
}

void validate_rows(const std::vector<ExperimentRow>& rows) {
    for (const auto& r : rows) {
        require(!r.model.empty() && r.model.find(',') == std::string::npos, ErrorCode::Format,
                "bad model name '" + r.model + "' in experiment row");
        require(!r.metric.empty() && r.metric.find(',') == std::string::npos, ErrorCode::Format,
                "bad metric name '" + r.metric + "' in experiment row");
        require(r.epoch >= 0, ErrorCode::Format, "negative epoch in experiment row");
        require(std::isfinite(r.value), ErrorCode::NonFinite,
                "non-finite " + r.metric + " for " + r.model + " at epoch " + std::to_string(r.epoch));
    }
}

void write_experiment_csv(std::ostream& os, const std::vector<ExperimentRow>& rows) {
    validate_rows(rows);
    os << "model,epoch,metric,value\n";
    const auto old = os.precision(17);
    for (const auto& r : rows) os << r.model << ',' << r.epoch << ',' << r.metric << ',' << r.value << '\n';
    os.precision(old);
}

std::vector<ModelConfig> standard_model_set(const ModelConfig& base) {
    auto make = [&base](const char* name, const char* kind, int chips) {
        ModelConfig m = base;
        m.name = name;
        m.kind = kind;
        m.chips = chips;
        return m;
    };
    return {make("classical", "classical_ae", 1), make("single_chip", "single_chip_ae", 1),
            make("dimreduc_2chip", "multichip_ae_reduced", 2), make("dimreduc_4chip", "multichip_ae_reduced", 4),
            make("ensemble_full", "multichip_ae_full", 1)};
}

namespace {

std::vector<ModelConfig> models_for(const TrainConfig& cfg) {
    if (!cfg.experiment.models.empty()) return cfg.experiment.models;
    if (is_classification(cfg.model)) return {cfg.model};
    return standard_model_set(cfg.model);
}

void add_curve_rows(const RunRecord& run, std::vector<ExperimentRow>& rows) {
    for (const auto& e : run.epochs) {
        rows.push_back({run.model_name, e.epoch, "train_loss", e.train_loss});
        rows.push_back({run.model_name, e.epoch, "val_loss", e.val_loss});
    }
}

std::vector<MetricRow> barren_plateau(const TrainConfig& cfg) {
    const int n = cfg.model.n_qubits;
    const int samples = cfg.experiment.samples;
    std::vector<MetricRow> rows;
    for (int k : cfg.experiment.ks) {
        require(k >= 1 && n % k == 0, ErrorCode::Config,
                "chip count " + std::to_string(k) + " does not divide " + std::to_string(n) + " qubits");
        const int l = n / k;
        const CircuitSpec chip = hardware_efficient_chip(l, cfg.model.depth);
        const auto ent = entangling_capability(chip, k, samples, cfg.seeds.sampling);
        const double gv = gradient_variance(chip, k, samples, cfg.seeds.sampling);
        rows.push_back({"ent", n, k, l, samples, cfg.seeds.sampling, ent.normalized});
        rows.push_back({"ent_unnormalized", n, k, l, samples, cfg.seeds.sampling, ent.unnormalized});
        rows.push_back({"gradvar", n, k, l, samples, cfg.seeds.sampling, gv});
    }
    return rows;
}

}  // namespace

ExperimentResult run_experiment(ExperimentKind kind, const TrainConfig& cfg) {
    if (kind == ExperimentKind::BarrenPlateau) return run_experiment(kind, cfg, Dataset{});
    const Dataset ds = load_dataset(cfg.data, is_classification(cfg.model), cfg.seeds.data);
    return run_experiment(kind, cfg, ds);
}

ExperimentResult run_experiment(ExperimentKind kind, const TrainConfig& cfg, const Dataset& ds) {
    ExperimentResult res;
    res.kind = kind;
    std::filesystem::create_directories(cfg.output_dir);
    res.csv_path = std::filesystem::path(cfg.output_dir) / (std::string(to_string(kind)) + ".csv");

    if (kind == ExperimentKind::BarrenPlateau) {
        res.metric_rows = barren_plateau(cfg);
        std::ofstream out(res.csv_path);
        require(out.good(), ErrorCode::Io, "cannot write '" + res.csv_path.string() + "'");
        write_metric_csv(out, res.metric_rows);
        return res;
    }

    const NoiseModel noise{cfg.backend.eps, cfg.backend.gamma};
    ZneConfig zne = cfg.zne.value_or(ZneConfig{});
    if (!cfg.zne) zne.exact = cfg.backend.n_cir == 0;
    const auto val_rows = ds.indices(SplitTag::Val);
    const std::vector<std::size_t> probe(val_rows.begin(),
                                         val_rows.begin() + static_cast<std::ptrdiff_t>(std::min(
                                                                val_rows.size(), cfg.experiment.eval_samples)));

    for (const ModelConfig& m : models_for(cfg)) {
        TrainConfig c = cfg;
        c.model = m;
        TrainHooks hooks;
        const bool quantum = m.kind != "classical_ae";
        if (kind == ExperimentKind::NoiseResilience && !quantum) continue;
        const bool with_zne = std::find(cfg.experiment.zne_models.begin(), cfg.experiment.zne_models.end(),
                                        m.display_name()) != cfg.experiment.zne_models.end() ||
                              std::find(cfg.experiment.zne_models.begin(), cfg.experiment.zne_models.end(),
                                        m.kind) != cfg.experiment.zne_models.end();
        std::vector<ExperimentRow> noise_rows;
        if (kind == ExperimentKind::NoiseResilience) {
            const LossKind loss = c.resolved_loss();
            hooks.on_epoch = [&, loss, with_zne](int epoch, const TrainableModel& model, MetricsRecord& rec) {
                const std::string name = m.display_name();
                const double ideal = mean_loss(model, ds, probe, loss, Backend::ideal());
                const double noisy =
                    mean_loss(model, ds, probe, loss, Backend::noisy(noise, cfg.backend.n_cir, cfg.seeds.sampling));
                rec.quantum_error = quantum_error(noisy, ideal);
                noise_rows.push_back({name, epoch, "val_loss_ideal", ideal});
                noise_rows.push_back({name, epoch, "val_loss_noisy", noisy});
                noise_rows.push_back({name, epoch, "quantum_error", *rec.quantum_error});
                if (with_zne) {
                    const double mitigated =
                        mean_loss(model, ds, probe, loss, Backend::mitigated(noise, zne, cfg.seeds.sampling));
                    noise_rows.push_back({name, epoch, "val_loss_zne", mitigated});
                    noise_rows.push_back({name, epoch, "quantum_error_zne", quantum_error(mitigated, ideal)});
                }
            };
        }
        RunRecord run = train(c, ds, hooks);
        if (kind == ExperimentKind::NoiseResilience) {
            res.rows.insert(res.rows.end(), noise_rows.begin(), noise_rows.end());
        } else {
            add_curve_rows(run, res.rows);
            if (kind == ExperimentKind::Generalization) {
                res.rows.push_back({run.model_name, 0, "final_train_loss", run.summary.final_train_loss});
                res.rows.push_back({run.model_name, 0, "test_loss", run.summary.test_loss});
                res.rows.push_back({run.model_name, 0, "gen_error", run.summary.gen_error});
            }
        }
        res.runs.push_back(std::move(run));
    }
    validate_rows(res.rows);
    std::ofstream out(res.csv_path);
    require(out.good(), ErrorCode::Io, "cannot write '" + res.csv_path.string() + "'");
    write_experiment_csv(out, res.rows);
    return res;
}

}  // namespace mcvqc
