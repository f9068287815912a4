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

#include <cstdio>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "mcvqc/config.hpp"
#include "mcvqc/error.hpp"
#include "mcvqc/experiment.hpp"
#include "mcvqc/metrics.hpp"
#include "mcvqc/mitigation.hpp"
#include "mcvqc/models.hpp"
#include "mcvqc/train.hpp"

using namespace mcvqc;

namespace {

std::string one_line(std::string s) {
    for (auto& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

int report_error(const std::string& code, const std::string& message, int exit_code) {
    std::cerr << Json{{"error", code}, {"message", one_line(message)}}.dump() << '\n';
    return exit_code;
}

Json summary_json(const RunRecord& run) {
    return Json{{"model", run.model_name},
                {"epochs", run.epochs.size()},
                {"final_train_loss", run.summary.final_train_loss},
                {"final_val_loss", run.summary.final_val_loss},
                {"test_loss", run.summary.test_loss},
                {"gen_error", run.summary.gen_error},
                {"stopped_early", run.stopped_early},
                {"wall_clock_s", run.wall_clock_s},
                {"checkpoint", run.checkpoint_path.string()},
                {"log", run.log_path.string()}};
}

int cmd_train(const std::string& config_path, const std::string& resume) {
    const TrainConfig cfg = load_config(config_path);
    const Dataset ds = load_dataset(cfg.data, is_classification(cfg.model), cfg.seeds.data);
    TrainHooks hooks;
    if (!resume.empty()) hooks.resume_from = resume;
    const RunRecord run = train(cfg, ds, hooks);
    std::cout << summary_json(run).dump() << '\n';
    return 0;
}

int cmd_experiment(const std::string& kind, const std::string& config_path) {
    const TrainConfig cfg = load_config(config_path);
    const ExperimentResult res = run_experiment(experiment_kind_from_string(kind), cfg);
    Json runs = Json::array();
    for (const auto& r : res.runs) runs.push_back(summary_json(r));
    std::cout << Json{{"kind", to_string(res.kind)}, {"csv", res.csv_path.string()}, {"runs", runs}}.dump() << '\n';
    return 0;
}

int cmd_metrics(const std::string& metric, int n, int chips, int samples, std::uint64_t seed, int depth,
                const std::string& probe) {
    require(chips >= 1 && n % chips == 0, ErrorCode::InvalidArgument,
            "--chips must divide --n (" + std::to_string(n) + " % " + std::to_string(chips) + ")");
    const int l = n / chips;
    const CircuitSpec chip = hardware_efficient_chip(l, depth);
    std::vector<MetricRow> rows;
    if (metric == "ent") {
        const auto e = entangling_capability(chip, chips, samples, seed);
        rows.push_back({"ent", n, chips, l, samples, seed, e.normalized});
        rows.push_back({"ent_unnormalized", n, chips, l, samples, seed, e.unnormalized});
    } else if (metric == "gradvar") {
        GradVarianceOptions opts;
        if (probe == "first") {
            opts.probe = GradProbe::FirstSlot;
        } else {
            require(probe == "all", ErrorCode::InvalidArgument, "--probe must be first or all");
        }
        rows.push_back({"gradvar", n, chips, l, samples, seed, gradient_variance(chip, chips, samples, seed, opts)});
    } else {
        fail(ErrorCode::InvalidArgument, "--metric must be ent or gradvar");
    }
    write_metric_csv(std::cout, rows);
    return 0;
}

int cmd_zne(const std::string& config_path) {
    const TrainConfig cfg = load_config(config_path);
    const ZneConfig zne = cfg.zne.value_or(ZneConfig{});
    const NoiseModel noise{cfg.backend.eps, cfg.backend.gamma};
    const CircuitSpec chip = hardware_efficient_chip(cfg.model.n_qubits, cfg.model.depth);
    std::mt19937_64 rng(cfg.seeds.sampling);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.141592653589793);
    std::vector<double> enc(chip.num_encoding), theta(chip.num_trainable);
    for (auto& x : enc) x = angle(rng);
    for (auto& x : theta) x = angle(rng);
    const double ideal = circuit_expectation(chip, enc, theta, Backend::ideal());
    const double noisy = circuit_expectation(chip, enc, theta, Backend::noisy(noise));
    const MitigatedResult r = mitigated_expectation(chip, enc, theta, noise, zne, cfg.seeds.sampling);
    Json scales = Json::array();
    for (const auto& p : r.per_scale) scales.push_back(Json{{"lambda", p.lambda}, {"value", p.value}});
    std::cout << Json{{"ideal", ideal},
                      {"noisy", noisy},
                      {"mitigated", r.estimate},
                      {"per_scale", scales},
                      {"zne", to_json(zne)}}
                     .dump()
              << '\n';
    return 0;
}

int cmd_inspect(const std::string& path) {
    const Checkpoint c = load_checkpoint(path);
    Json j{{"version", c.version},
           {"model_kind", c.model_kind},
           {"input_dim", c.input_dim},
           {"parameter_count", c.parameters.size()},
           {"epochs_completed", c.epochs_completed},
           {"config_hash", c.config_hash},
           {"permutation_size", c.permutation.size()},
           {"adam_steps", c.adam.t}};
    if (!c.history.empty()) j["last_epoch"] = to_json(c.history.back());
    j["config"] = c.config;
    std::cout << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-chip ensemble variational quantum circuits"};
    app.require_subcommand(1);

    std::string config, resume, kind, metric = "ent", checkpoint, probe = "all";
    int n = 8, chips = 1, samples = 1000, depth = 2;
    std::uint64_t seed = 0;

    auto* train_cmd = app.add_subcommand("train", "Train one model from a config file");
    train_cmd->add_option("--config", config, "JSON config")->required();
    train_cmd->add_option("--resume", resume, "Checkpoint to resume from");

    auto* exp_cmd = app.add_subcommand("experiment", "Run an experiment family");
    exp_cmd->add_option("--kind", kind, "performance | generalization | barren_plateau | noise_resilience")
        ->required();
    exp_cmd->add_option("--config", config, "JSON config")->required();

    auto* met_cmd = app.add_subcommand("metrics", "Entangling capability or gradient variance sweep point");
    met_cmd->add_option("--metric", metric, "ent | gradvar")->required();
    met_cmd->add_option("--n", n, "Total qubits")->required();
    met_cmd->add_option("--chips", chips, "Number of chips")->required();
    met_cmd->add_option("--samples", samples, "Parameter samples")->required();
    met_cmd->add_option("--seed", seed, "RNG seed")->required();
    met_cmd->add_option("--depth", depth, "Ansatz layers");
    met_cmd->add_option("--probe", probe, "gradvar probe: all | first");

    auto* zne_cmd = app.add_subcommand("zne", "Zero-noise extrapolation on a random chip circuit");
    zne_cmd->add_option("--config", config, "JSON config")->required();

    auto* insp_cmd = app.add_subcommand("inspect", "Print checkpoint contents");
    insp_cmd->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("usage", e.what(), 2);
    }

    try {
        if (*train_cmd) return cmd_train(config, resume);
        if (*exp_cmd) return cmd_experiment(kind, config);
        if (*met_cmd) return cmd_metrics(metric, n, chips, samples, seed, depth, probe);
        if (*zne_cmd) return cmd_zne(config);
        if (*insp_cmd) return cmd_inspect(checkpoint);
    } catch (const Error& e) {
        return report_error(to_string(e.code()), e.what(), 1);
    } catch (const std::exception& e) {
        return report_error("internal", e.what(), 3);
    }
    return 0;
}
