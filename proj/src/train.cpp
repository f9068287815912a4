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

#include "mcvqc/train.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "mcvqc/ensemble.hpp"
#include "mcvqc/error.hpp"
#include "mcvqc/rng.hpp"

namespace mcvqc {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, const AdamConfig& cfg) {
    require(params.size() == grads.size() && state.m.size() == params.size() && state.v.size() == params.size(),
            ErrorCode::DimensionMismatch,
            "adam: " + std::to_string(params.size()) + " params, " + std::to_string(grads.size()) + " grads, " +
                std::to_string(state.m.size()) + " moments");
    ++state.t;
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grads[i];
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
        const double mhat = state.m[i] / c1;
        const double vhat = state.v[i] / c2;
        params[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps_hat);
    }
}

double mean_loss(const TrainableModel& model, const Dataset& ds, std::span<const std::size_t> rows, LossKind loss,
                 const Backend& backend) {
    const std::size_t n = rows.empty() ? ds.size() : rows.size();
    require(n > 0, ErrorCode::InvalidArgument, "cannot evaluate a loss over zero rows");
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t i = rows.empty() ? r : rows[r];
        sum += evaluate_loss(loss, model.predict(ds.features[i], backend), ds.targets[i]).loss;
    }
    return sum / static_cast<double>(n);
}

Json to_json(const MetricsRecord& r) {
    Json j{{"epoch", r.epoch}, {"train_loss", r.train_loss}, {"val_loss", r.val_loss}};
    if (r.test_loss) j["test_loss"] = *r.test_loss;
    if (r.gen_error) j["gen_error"] = *r.gen_error;
    if (r.quantum_error) j["quantum_error"] = *r.quantum_error;
    if (r.ent_capability) j["ent_capability"] = *r.ent_capability;
    if (r.grad_variance) j["grad_variance"] = *r.grad_variance;
    return j;
}

MetricsRecord metrics_record_from_json(const Json& j) {
    MetricsRecord r;
    r.epoch = j.at("epoch").get<int>();
    r.train_loss = j.at("train_loss").get<double>();
    r.val_loss = j.at("val_loss").get<double>();
    auto opt = [&j](const char* key, std::optional<double>& out) {
        if (j.contains(key)) out = j[key].get<double>();
    };
    opt("test_loss", r.test_loss);
    opt("gen_error", r.gen_error);
    opt("quantum_error", r.quantum_error);
    opt("ent_capability", r.ent_capability);
    opt("grad_variance", r.grad_variance);
    return r;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
    Json j;
    j["format"] = "mcvqc-checkpoint";
    j["version"] = c.version;
    j["model_kind"] = c.model_kind;
    j["input_dim"] = c.input_dim;
    j["config"] = c.config;
    j["config_hash"] = c.config_hash;
    j["epochs_completed"] = c.epochs_completed;
    j["parameters"] = c.parameters;
    j["permutation"] = c.permutation;
    j["adam"] = Json{{"t", c.adam.t}, {"m", c.adam.m}, {"v", c.adam.v}};
    Json hist = Json::array();
    for (const auto& r : c.history) hist.push_back(to_json(r));
    j["history"] = hist;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp);
        require(out.good(), ErrorCode::Io, "cannot write checkpoint '" + tmp.string() + "'");
        out << j.dump() << '\n';
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::Io, "cannot open checkpoint '" + path.string() + "'");
    Checkpoint c;
    try {
        const Json j = Json::parse(in);
        require(j.value("format", "") == "mcvqc-checkpoint", ErrorCode::Format,
                path.string() + ": not an mcvqc checkpoint");
        c.version = j.at("version").get<int>();
        require(c.version == Checkpoint::kVersion, ErrorCode::Format,
                path.string() + ": unsupported checkpoint version " + std::to_string(c.version));
        c.model_kind = j.at("model_kind").get<std::string>();
        c.input_dim = j.at("input_dim").get<int>();
        c.config = j.at("config");
        c.config_hash = j.at("config_hash").get<std::uint64_t>();
        c.epochs_completed = j.at("epochs_completed").get<int>();
        c.parameters = j.at("parameters").get<std::vector<double>>();
        c.permutation = j.at("permutation").get<std::vector<int>>();
        c.adam.t = j.at("adam").at("t").get<std::uint64_t>();
        c.adam.m = j.at("adam").at("m").get<std::vector<double>>();
        c.adam.v = j.at("adam").at("v").get<std::vector<double>>();
        for (const auto& r : j.at("history")) c.history.push_back(metrics_record_from_json(r));
    } catch (const Json::exception& e) {
        fail(ErrorCode::Format, path.string() + ": " + e.what());
    }
    return c;
}

std::unique_ptr<TrainableModel> restore_model(const Checkpoint& ckpt) {
    const TrainConfig cfg = parse_config(ckpt.config);
    auto model = build_model(cfg.model, ckpt.input_dim, cfg.seeds.model);
    require(model->kind() == ckpt.model_kind, ErrorCode::Format,
            "checkpoint model kind '" + ckpt.model_kind + "' does not match config kind '" + model->kind() + "'");
    require(model->parameter_count() == ckpt.parameters.size(), ErrorCode::Format,
            "checkpoint holds " + std::to_string(ckpt.parameters.size()) + " parameters, model needs " +
                std::to_string(model->parameter_count()));
    if (auto* ens = dynamic_cast<EnsembleModel*>(model.get())) {
        require(ckpt.permutation.size() == ens->partition.permutation.size(), ErrorCode::Format,
                "checkpoint permutation size mismatch");
        ens->partition.permutation = ckpt.permutation;
        ens->partition.validate();
    }
    model->set_parameters(ckpt.parameters);
    return model;
}

namespace {

void check_arity(const TrainableModel& model, const Dataset& ds, LossKind loss) {
    require(ds.dim() == static_cast<std::size_t>(model.input_dim()), ErrorCode::DimensionMismatch,
            "dataset has " + std::to_string(ds.dim()) + " features, model expects " +
                std::to_string(model.input_dim()));
    const std::size_t t = ds.targets.front().size();
    const bool ok = loss == LossKind::CrossEntropy ? (t == 1 || t == static_cast<std::size_t>(model.output_dim()))
                                                   : t == static_cast<std::size_t>(model.output_dim());
    require(ok, ErrorCode::DimensionMismatch,
            "target width " + std::to_string(t) + " does not fit model output " + std::to_string(model.output_dim()));
}

}  // namespace

RunRecord train(const TrainConfig& cfg, const Dataset& ds, const TrainHooks& hooks) {
    const auto t0 = std::chrono::steady_clock::now();
    cfg.validate();
    const LossKind loss = cfg.resolved_loss();
    const int input_dim = static_cast<int>(ds.dim());
    std::shared_ptr<TrainableModel> model = build_model(cfg.model, input_dim, cfg.seeds.model);
    check_arity(*model, ds, loss);

    RunRecord rec;
    rec.config = to_json(cfg);
    rec.model_name = cfg.model.display_name();
    const std::uint64_t hash = config_hash(cfg);

    std::vector<double> params = model->parameters();
    AdamState adam(params.size());
    int start_epoch = 0;
    if (hooks.resume_from) {
        Checkpoint ck = load_checkpoint(*hooks.resume_from);
        require(ck.config_hash == hash, ErrorCode::Config, "checkpoint config hash does not match this config");
        model = restore_model(ck);
        params = ck.parameters;
        adam = ck.adam;
        start_epoch = ck.epochs_completed;
        rec.epochs = ck.history;
    }

    const auto train_rows = ds.indices(SplitTag::Train);
    const auto val_rows = ds.indices(SplitTag::Val);
    const auto test_rows = ds.indices(SplitTag::Test);
    require(!train_rows.empty() && !val_rows.empty(), ErrorCode::Config, "train and val splits must be nonempty");

    const GradientOptions gopts{cfg.gradient, cfg.train_backend()};
    const Backend eval = cfg.train_backend();

    if (hooks.write_artifacts) {
        std::filesystem::create_directories(cfg.output_dir);
        rec.checkpoint_path = std::filesystem::path(cfg.output_dir) / (rec.model_name + ".ckpt.json");
        rec.log_path = std::filesystem::path(cfg.output_dir) / (rec.model_name + ".log.jsonl");
        std::ofstream log(rec.log_path, std::ios::trunc);
        for (const auto& r : rec.epochs) log << to_json(r).dump() << '\n';
    }

    std::vector<double> grad(params.size());
    for (int epoch = start_epoch + 1; epoch <= cfg.epochs; ++epoch) {
        if (hooks.stop_after && epoch > *hooks.stop_after) {
            rec.stopped_early = true;
            break;
        }
        double epoch_sum = 0.0;
        std::size_t seen = 0;
        const auto plan = batches(ds, SplitTag::Train, cfg.batch_size, derive_seed(cfg.seeds.data, 1000 + epoch));
        for (std::size_t b = 0; b < plan.size(); ++b) {
            std::fill(grad.begin(), grad.end(), 0.0);
            double batch_sum = 0.0;
            for (std::size_t i : plan[b]) {
                batch_sum += model->accumulate_gradient(ds.features[i], ds.targets[i], loss, grad, gopts);
            }
            require(std::isfinite(batch_sum), ErrorCode::NonFinite,
                    "non-finite loss at epoch " + std::to_string(epoch) + " batch " + std::to_string(b));
            const double inv = 1.0 / static_cast<double>(plan[b].size());
            for (auto& g : grad) g *= inv;
            adam_step(params, grad, adam, cfg.optimizer);
            model->set_parameters(params);
            epoch_sum += batch_sum;
            seen += plan[b].size();
        }
        MetricsRecord m;
        m.epoch = epoch;
        m.train_loss = epoch_sum / static_cast<double>(seen);
        m.val_loss = mean_loss(*model, ds, val_rows, loss, eval);
        require(std::isfinite(m.val_loss), ErrorCode::NonFinite, "non-finite validation loss at epoch " +
                                                                     std::to_string(epoch));
        if (hooks.on_epoch) hooks.on_epoch(epoch, *model, m);
        rec.epochs.push_back(m);
        if (hooks.write_artifacts) {
            std::ofstream log(rec.log_path, std::ios::app);
            log << to_json(m).dump() << '\n';
            Checkpoint ck;
            ck.model_kind = model->kind();
            ck.input_dim = input_dim;
            ck.config = rec.config;
            ck.config_hash = hash;
            ck.epochs_completed = epoch;
            ck.parameters = params;
            if (auto* ens = dynamic_cast<EnsembleModel*>(model.get())) ck.permutation = ens->partition.permutation;
            ck.adam = adam;
            ck.history = rec.epochs;
            save_checkpoint(rec.checkpoint_path, ck);
        }
    }

    rec.summary.final_train_loss = mean_loss(*model, ds, train_rows, loss, eval);
    rec.summary.final_val_loss = mean_loss(*model, ds, val_rows, loss, eval);
    if (!test_rows.empty()) {
        rec.summary.test_loss = mean_loss(*model, ds, test_rows, loss, eval);
        rec.summary.gen_error = generalization_error(rec.summary.test_loss, rec.summary.final_train_loss);
    }
    rec.model = model;
    rec.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

}  // namespace mcvqc
