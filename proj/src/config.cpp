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

#include "mcvqc/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>

#include "mcvqc/error.hpp"
#include "mcvqc/models.hpp"
#include "mcvqc/rng.hpp"

namespace mcvqc {

namespace {

void check_keys(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    require(j.is_object(), ErrorCode::Config, where + " must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : j.items()) {
        require(ok.count(item.key()) > 0, ErrorCode::Config, "unknown key '" + where + "." + item.key() + "'");
    }
}

template <typename T>
void read(const Json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const Json::exception& e) {
        fail(ErrorCode::Config, where + "." + key + ": " + e.what());
    }
}

}  // namespace

bool is_classification(const ModelConfig& m) { return m.kind == "qcnn"; }

void TrainConfig::validate() const {
    require(optimizer.lr > 0.0, ErrorCode::Config, "optimizer.lr must be > 0");
    require(optimizer.beta1 >= 0.0 && optimizer.beta1 < 1.0, ErrorCode::Config, "optimizer.beta1 must be in [0, 1)");
    require(optimizer.beta2 >= 0.0 && optimizer.beta2 < 1.0, ErrorCode::Config, "optimizer.beta2 must be in [0, 1)");
    require(optimizer.eps_hat > 0.0, ErrorCode::Config, "optimizer.eps_hat must be > 0");
    require(epochs >= 1, ErrorCode::Config, "epochs must be >= 1");
    require(batch_size >= 1, ErrorCode::Config, "batch_size must be >= 1");
    const double frac_sum = data.fractions[0] + data.fractions[1] + data.fractions[2];
    require(std::abs(frac_sum - 1.0) <= 1e-9 &&
                std::all_of(data.fractions.begin(), data.fractions.end(), [](double f) { return f >= 0.0; }),
            ErrorCode::Config, "data.fractions must be nonnegative and sum to 1");
    require(backend.kind == "ideal" || backend.kind == "noisy", ErrorCode::Config,
            "backend.kind must be ideal or noisy");
    NoiseModel{backend.eps, backend.gamma}.validate();
    if (zne) zne->validate();
    require(!(train_under_noise && gradient == GradMethod::Adjoint && backend.kind == "noisy"), ErrorCode::Config,
            "training under noise needs gradient = parameter_shift");
}

LossKind TrainConfig::resolved_loss() const {
    if (loss) return *loss;
    return is_classification(model) ? LossKind::CrossEntropy : LossKind::Mse;
}

Backend TrainConfig::eval_backend() const {
    if (backend.kind == "ideal") return Backend::ideal();
    return Backend::noisy({backend.eps, backend.gamma}, backend.n_cir, seeds.sampling);
}

Backend TrainConfig::train_backend() const {
    return train_under_noise ? eval_backend() : Backend::ideal();
}

ModelConfig parse_model_config(const Json& j) {
    check_keys(j, "model", {"name", "kind", "n_qubits", "chips", "chip_width", "depth", "num_classes"});
    ModelConfig m;
    read(j, "name", m.name, "model");
    read(j, "kind", m.kind, "model");
    read(j, "n_qubits", m.n_qubits, "model");
    read(j, "chips", m.chips, "model");
    read(j, "chip_width", m.chip_width, "model");
    read(j, "depth", m.depth, "model");
    read(j, "num_classes", m.num_classes, "model");
    static const std::set<std::string> kinds{"classical_ae", "single_chip_ae", "multichip_ae_reduced",
                                             "multichip_ae_full", "qcnn"};
    require(kinds.count(m.kind) > 0, ErrorCode::Config, "unknown model.kind '" + m.kind + "'");
    require(m.n_qubits >= 1 && m.chips >= 1 && m.chip_width >= 1 && m.depth >= 1, ErrorCode::Config,
            "model sizes must be >= 1");
    return m;
}

Json to_json(const ModelConfig& m) {
    Json j{{"kind", m.kind},   {"n_qubits", m.n_qubits}, {"chips", m.chips},
           {"chip_width", m.chip_width}, {"depth", m.depth}, {"num_classes", m.num_classes}};
    if (!m.name.empty()) j["name"] = m.name;
    return j;
}

ZneConfig parse_zne_config(const Json& j) {
    check_keys(j, "zne", {"scale_factors", "extrapolation", "n_cir", "exact"});
    ZneConfig z;
    read(j, "scale_factors", z.scale_factors, "zne");
    std::string ex = to_string(z.extrapolation);
    read(j, "extrapolation", ex, "zne");
    z.extrapolation = extrapolation_from_string(ex);
    read(j, "n_cir", z.n_cir, "zne");
    read(j, "exact", z.exact, "zne");
    z.validate();
    return z;
}

Json to_json(const ZneConfig& z) {
    return Json{{"scale_factors", z.scale_factors},
                {"extrapolation", to_string(z.extrapolation)},
                {"n_cir", z.n_cir},
                {"exact", z.exact}};
}

TrainConfig parse_config(const Json& j) {
    check_keys(j, "config", {"model", "data", "optimizer", "epochs", "batch_size", "loss", "seeds", "backend",
                             "train_under_noise", "gradient", "zne", "output_dir", "experiment"});
    TrainConfig c;
    if (j.contains("model")) c.model = parse_model_config(j["model"]);
    if (j.contains("data")) {
        const Json& d = j["data"];
        check_keys(d, "data", {"source", "n_samples", "fractions", "idx_images", "idx_labels", "downsample",
                               "allow_synthetic_fallback", "csv_path", "target_column", "dim", "classes",
                               "channels", "timesteps"});
        auto& o = c.data;
        read(d, "source", o.source, "data");
        read(d, "n_samples", o.n_samples, "data");
        read(d, "fractions", o.fractions, "data");
        read(d, "idx_images", o.idx_images, "data");
        read(d, "idx_labels", o.idx_labels, "data");
        read(d, "downsample", o.downsample, "data");
        read(d, "allow_synthetic_fallback", o.allow_synthetic_fallback, "data");
        read(d, "csv_path", o.csv_path, "data");
        read(d, "target_column", o.target_column, "data");
        read(d, "dim", o.dim, "data");
        read(d, "classes", o.classes, "data");
        read(d, "channels", o.channels, "data");
        read(d, "timesteps", o.timesteps, "data");
    }
    if (j.contains("optimizer")) {
        const Json& o = j["optimizer"];
        check_keys(o, "optimizer", {"name", "lr", "beta1", "beta2", "eps_hat"});
        std::string name = "adam";
        read(o, "name", name, "optimizer");
        require(name == "adam", ErrorCode::Config, "optimizer.name must be adam");
        read(o, "lr", c.optimizer.lr, "optimizer");
        read(o, "beta1", c.optimizer.beta1, "optimizer");
        read(o, "beta2", c.optimizer.beta2, "optimizer");
        read(o, "eps_hat", c.optimizer.eps_hat, "optimizer");
    }
    read(j, "epochs", c.epochs, "config");
    read(j, "batch_size", c.batch_size, "config");
    if (j.contains("loss")) {
        std::string l;
        read(j, "loss", l, "config");
        try {
            c.loss = loss_kind_from_string(l);
        } catch (const Error& e) {
            fail(ErrorCode::Config, e.what());
        }
    }
    if (j.contains("seeds")) {
        const Json& s = j["seeds"];
        check_keys(s, "seeds", {"model", "data", "sampling"});
        read(s, "model", c.seeds.model, "seeds");
        read(s, "data", c.seeds.data, "seeds");
        read(s, "sampling", c.seeds.sampling, "seeds");
    }
    if (j.contains("backend")) {
        const Json& b = j["backend"];
        check_keys(b, "backend", {"kind", "eps", "gamma", "n_cir"});
        read(b, "kind", c.backend.kind, "backend");
        read(b, "eps", c.backend.eps, "backend");
        read(b, "gamma", c.backend.gamma, "backend");
        read(b, "n_cir", c.backend.n_cir, "backend");
    }
    read(j, "train_under_noise", c.train_under_noise, "config");
    if (j.contains("gradient")) {
        std::string g;
        read(j, "gradient", g, "config");
        require(g == "adjoint" || g == "parameter_shift", ErrorCode::Config,
                "gradient must be adjoint or parameter_shift");
        c.gradient = g == "adjoint" ? GradMethod::Adjoint : GradMethod::ParameterShift;
    }
    if (j.contains("zne")) c.zne = parse_zne_config(j["zne"]);
    read(j, "output_dir", c.output_dir, "config");
    if (j.contains("experiment")) {
        const Json& e = j["experiment"];
        check_keys(e, "experiment", {"models", "ks", "samples", "eval_samples", "zne_models"});
        if (e.contains("models")) {
            require(e["models"].is_array(), ErrorCode::Config, "experiment.models must be an array");
            for (const auto& m : e["models"]) c.experiment.models.push_back(parse_model_config(m));
        }
        read(e, "ks", c.experiment.ks, "experiment");
        read(e, "samples", c.experiment.samples, "experiment");
        read(e, "eval_samples", c.experiment.eval_samples, "experiment");
        read(e, "zne_models", c.experiment.zne_models, "experiment");
    }
    c.validate();
    return c;
}

TrainConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::Io, "cannot open config '" + path.string() + "'");
    Json j;
    try {
        j = Json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const Json::parse_error& e) {
        fail(ErrorCode::Config, path.string() + ": " + e.what());
    }
    return parse_config(j);
}

Json to_json(const TrainConfig& c) {
    Json j;
    j["model"] = to_json(c.model);
    const auto& d = c.data;
    j["data"] = Json{{"source", d.source},
                     {"n_samples", d.n_samples},
                     {"fractions", d.fractions},
                     {"idx_images", d.idx_images},
                     {"idx_labels", d.idx_labels},
                     {"downsample", d.downsample},
                     {"allow_synthetic_fallback", d.allow_synthetic_fallback},
                     {"csv_path", d.csv_path},
                     {"target_column", d.target_column},
                     {"dim", d.dim},
                     {"classes", d.classes},
                     {"channels", d.channels},
                     {"timesteps", d.timesteps}};
    j["optimizer"] = Json{{"name", "adam"},
                          {"lr", c.optimizer.lr},
                          {"beta1", c.optimizer.beta1},
                          {"beta2", c.optimizer.beta2},
                          {"eps_hat", c.optimizer.eps_hat}};
    j["epochs"] = c.epochs;
    j["batch_size"] = c.batch_size;
    j["loss"] = to_string(c.resolved_loss());
    j["seeds"] = Json{{"model", c.seeds.model}, {"data", c.seeds.data}, {"sampling", c.seeds.sampling}};
    j["backend"] = Json{{"kind", c.backend.kind},
                        {"eps", c.backend.eps},
                        {"gamma", c.backend.gamma},
                        {"n_cir", c.backend.n_cir}};
    j["train_under_noise"] = c.train_under_noise;
    j["gradient"] = c.gradient == GradMethod::Adjoint ? "adjoint" : "parameter_shift";
    if (c.zne) j["zne"] = to_json(*c.zne);
    j["output_dir"] = c.output_dir;
    Json models = Json::array();
    for (const auto& m : c.experiment.models) models.push_back(to_json(m));
    j["experiment"] = Json{{"models", models},
                           {"ks", c.experiment.ks},
                           {"samples", c.experiment.samples},
                           {"eval_samples", c.experiment.eval_samples},
                           {"zne_models", c.experiment.zne_models}};
    return j;
}

std::uint64_t config_hash(const TrainConfig& cfg) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : to_json(cfg).dump()) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::unique_ptr<TrainableModel> build_model(const ModelConfig& m, int input_dim, std::uint64_t seed) {
    if (m.kind == "classical_ae") {
        return std::make_unique<ClassicalModel>(build_classical_ae(input_dim, m.n_qubits, m.depth, m.chips, seed));
    }
    if (m.kind == "single_chip_ae") {
        return std::make_unique<EnsembleModel>(build_single_chip_ae(input_dim, m.n_qubits, m.depth, seed));
    }
    if (m.kind == "multichip_ae_reduced") {
        return std::make_unique<EnsembleModel>(
            build_multichip_ae_reduced(input_dim, m.n_qubits, m.chips, m.depth, seed));
    }
    if (m.kind == "multichip_ae_full") {
        return std::make_unique<EnsembleModel>(build_multichip_ae_full(input_dim, m.chip_width, m.depth, seed));
    }
    if (m.kind == "qcnn") {
        return std::make_unique<EnsembleModel>(
            build_qcnn(m.n_qubits, m.depth, m.chips, input_dim, m.num_classes, seed));
    }
    fail(ErrorCode::Config, "unknown model kind '" + m.kind + "'");
}

namespace {

Dataset load_raw(const DataConfig& d, std::uint64_t seed) {
    if (d.source == "digits") return synthetic_digits(d.n_samples, seed);
    if (d.source == "blobs") {
        Dataset ds = synthetic_blobs(d.n_samples, d.dim, d.classes, seed);
        minmax_normalize(ds);
        return ds;
    }
    if (d.source == "spatiotemporal") return synthetic_spatiotemporal(d.n_samples, d.channels, d.timesteps, seed, d.classes);
    if (d.source == "csv") {
        require(!d.csv_path.empty(), ErrorCode::Config, "data.csv_path is required for csv source");
        return load_csv(d.csv_path, d.target_column);
    }
    if (d.source == "mnist") {
        std::filesystem::path images = d.idx_images;
        std::filesystem::path labels = d.idx_labels;
        if (images.empty() || labels.empty()) {
            if (const char* dir = std::getenv("MCVQC_MNIST_DIR")) {
                images = std::filesystem::path(dir) / "train-images-idx3-ubyte";
                labels = std::filesystem::path(dir) / "train-labels-idx1-ubyte";
            }
        }
        const bool present = !images.empty() && std::filesystem::exists(images) && std::filesystem::exists(labels);
        if (!present) {
            require(d.allow_synthetic_fallback, ErrorCode::Io,
                    "mnist idx files not found; set data.idx_images/idx_labels or MCVQC_MNIST_DIR");
            std::cerr << "warning: mnist idx files not found, using synthetic 8x8 digits\n";
            return synthetic_digits(d.n_samples, seed);
        }
        Dataset ds = parse_idx(images, labels);
        if (ds.size() > d.n_samples) {
            ds.features.resize(d.n_samples);
            ds.targets.resize(d.n_samples);
            ds.labels.resize(d.n_samples);
        }
        return d.downsample ? downsample_mnist(ds) : ds;
    }
    fail(ErrorCode::Config, "unknown data.source '" + d.source + "'");
}

}  // namespace

Dataset load_dataset(const DataConfig& data, bool classification, std::uint64_t seed) {
    Dataset ds = load_raw(data, derive_seed(seed, 0));
    require(ds.size() >= 3, ErrorCode::Config, "dataset needs at least 3 rows");
    if (!classification) ds = as_reconstruction(std::move(ds));
    ds.validate();
    return split(std::move(ds), data.fractions, derive_seed(seed, 1));
}

}  // namespace mcvqc
