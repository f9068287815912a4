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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mcvqc/config.hpp"
#include "mcvqc/error.hpp"
#include "mcvqc/experiment.hpp"
#include "mcvqc/train.hpp"

using namespace mcvqc;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir(const std::string& name) {
    const fs::path p = fs::path(MCVQC_TEST_TMPDIR) / "harness" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

Json desk_json(const fs::path& out) {
    Json j = Json::parse(R"({
        "model": {"name": "dr2", "kind": "multichip_ae_reduced", "n_qubits": 4, "chips": 2, "depth": 1},
        "data": {"source": "blobs", "n_samples": 60, "dim": 8, "classes": 2, "fractions": [0.6, 0.2, 0.2]},
        "optimizer": {"lr": 0.05},
        "epochs": 3,
        "batch_size": 16,
        "seeds": {"model": 4, "data": 5, "sampling": 6}
    })");
    j["output_dir"] = out.string();
    return j;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Adam, ZeroGradientLeavesParams) {
    std::vector<double> p{0.3, -1.2};
    AdamState st(2);
    for (int i = 0; i < 5; ++i) adam_step(p, std::vector<double>{0, 0}, st, AdamConfig{});
    EXPECT_EQ(p, (std::vector<double>{0.3, -1.2}));
    EXPECT_EQ(st.t, 5u);
}

TEST(Adam, HandComputedSteps) {
    AdamConfig cfg;
    cfg.lr = 0.1;
    std::vector<double> p{1.0};
    AdamState st(1);
    adam_step(p, std::vector<double>{2.0}, st, cfg);
    // Step 1: m_hat = g, v_hat = g^2.
    EXPECT_NEAR(p[0], 1.0 - 0.1 * 2.0 / (2.0 + 1e-8), 1e-15);
    adam_step(p, std::vector<double>{-1.0}, st, cfg);
    const double m = 0.9 * (0.1 * 2.0) + 0.1 * -1.0;
    const double v = 0.999 * (0.001 * 4.0) + 0.001 * 1.0;
    const double mh = m / (1 - 0.81), vh = v / (1 - 0.999 * 0.999);
    EXPECT_NEAR(p[0], 1.0 - 0.1 * 2.0 / (2.0 + 1e-8) - 0.1 * mh / (std::sqrt(vh) + 1e-8), 1e-14);
}

TEST(Adam, ConstantGradientStepBoundedByLr) {
    AdamConfig cfg;
    cfg.lr = 0.01;
    std::vector<double> p{0.0, 0.0};
    AdamState st(2);
    for (int i = 0; i < 200; ++i) {
        const auto before = p;
        adam_step(p, std::vector<double>{0.5, -3.0}, st, cfg);
        EXPECT_LE(std::abs(p[0] - before[0]), cfg.lr * (1 + 1e-9));
        EXPECT_NEAR(p[0] - before[0], -cfg.lr, 1e-6);
        EXPECT_NEAR(p[1] - before[1], cfg.lr, 1e-6);
    }
}

TEST(Adam, LengthMismatchThrows) {
    std::vector<double> p{0.0, 0.0};
    AdamState st(2);
    EXPECT_THROW(adam_step(p, std::vector<double>{1.0}, st, AdamConfig{}), Error);
}

TEST(Config, ParsesDeskConfig) {
    const auto cfg = parse_config(desk_json("x"));
    EXPECT_EQ(cfg.model.kind, "multichip_ae_reduced");
    EXPECT_EQ(cfg.model.chips, 2);
    EXPECT_EQ(cfg.optimizer.lr, 0.05);
    EXPECT_EQ(cfg.optimizer.beta1, 0.9);
    EXPECT_EQ(cfg.resolved_loss(), LossKind::Mse);
    EXPECT_EQ(config_hash(cfg), config_hash(parse_config(to_json(cfg))));
}

TEST(Config, RejectsUnknownKeysWithPath) {
    auto j = desk_json("x");
    j["optimizer"]["momentum"] = 0.9;
    try {
        parse_config(j);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Config);
        EXPECT_NE(std::string(e.what()).find("optimizer.momentum"), std::string::npos) << e.what();
    }
    auto top = desk_json("x");
    top["epoch"] = 3;
    EXPECT_THROW(parse_config(top), Error);
}

TEST(Config, RejectsInvalidValues) {
    for (const char* patch : {R"({"optimizer": {"lr": 0}})", R"({"optimizer": {"beta1": 1.0}})",
                              R"({"epochs": 0})", R"({"model": {"kind": "transformer"}})",
                              R"({"loss": "hinge"})", R"({"data": {"fractions": [0.5, 0.2, 0.2]}})"}) {
        auto j = desk_json("x");
        j.merge_patch(Json::parse(patch));
        EXPECT_THROW(parse_config(j), Error) << patch;
    }
}

TEST(Config, QcnnDefaultsToCrossEntropy) {
    auto j = desk_json("x");
    j["model"] = Json{{"kind", "qcnn"}, {"n_qubits", 4}, {"chips", 2}, {"depth", 1}, {"num_classes", 2}};
    const auto cfg = parse_config(j);
    EXPECT_TRUE(is_classification(cfg.model));
    EXPECT_EQ(cfg.resolved_loss(), LossKind::CrossEntropy);
}

TEST(Train, SmokeRunWritesArtifactsAndLearns) {
    const auto out = tmp_dir("smoke");
    const auto cfg = parse_config(desk_json(out));
    const auto ds = load_dataset(cfg.data, false, cfg.seeds.data);
    const auto run = train(cfg, ds);
    ASSERT_EQ(run.epochs.size(), 3u);
    EXPECT_LT(run.epochs.back().train_loss, run.epochs.front().train_loss);
    EXPECT_TRUE(fs::exists(run.checkpoint_path));
    EXPECT_TRUE(fs::exists(run.log_path));
    std::size_t lines = 0;
    std::istringstream log(read_file(run.log_path));
    for (std::string l; std::getline(log, l);) ++lines;
    EXPECT_EQ(lines, 3u);
    EXPECT_NEAR(run.summary.gen_error, run.summary.test_loss - run.summary.final_train_loss, 1e-15);
    EXPECT_FALSE(run.stopped_early);
}

TEST(Train, SameConfigIsBitIdentical) {
    const auto out = tmp_dir("det");
    const auto cfg = parse_config(desk_json(out));
    const auto ds = load_dataset(cfg.data, false, cfg.seeds.data);
    TrainHooks h;
    h.write_artifacts = false;
    const auto a = train(cfg, ds, h);
    const auto b = train(cfg, ds, h);
    EXPECT_EQ(a.model->parameters(), b.model->parameters());
    for (std::size_t e = 0; e < a.epochs.size(); ++e) EXPECT_EQ(a.epochs[e].val_loss, b.epochs[e].val_loss);
}

TEST(Train, ResumeReproducesUninterruptedRun) {
    const auto out = tmp_dir("resume");
    auto j = desk_json(out);
    j["epochs"] = 4;
    const auto cfg = parse_config(j);
    const auto ds = load_dataset(cfg.data, false, cfg.seeds.data);
    TrainHooks quiet;
    quiet.write_artifacts = false;
    const auto full = train(cfg, ds, quiet);

    TrainHooks first;
    first.stop_after = 2;
    const auto partial = train(cfg, ds, first);
    EXPECT_TRUE(partial.stopped_early);
    EXPECT_EQ(load_checkpoint(partial.checkpoint_path).epochs_completed, 2);
    TrainHooks second;
    second.resume_from = partial.checkpoint_path;
    const auto resumed = train(cfg, ds, second);
    ASSERT_EQ(resumed.epochs.size(), 4u);
    const auto pa = full.model->parameters();
    const auto pb = resumed.model->parameters();
    for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_NEAR(pa[i], pb[i], 1e-9);
    EXPECT_NEAR(full.summary.test_loss, resumed.summary.test_loss, 1e-9);
}

TEST(Train, ResumeRejectsDifferentConfig) {
    const auto out = tmp_dir("resume_bad");
    const auto cfg = parse_config(desk_json(out));
    const auto ds = load_dataset(cfg.data, false, cfg.seeds.data);
    TrainHooks first;
    first.stop_after = 1;
    const auto partial = train(cfg, ds, first);
    auto j = desk_json(out);
    j["optimizer"]["lr"] = 0.01;
    TrainHooks second;
    second.resume_from = partial.checkpoint_path;
    EXPECT_THROW(train(parse_config(j), ds, second), Error);
}

TEST(Checkpoint, RoundTripRestoresModel) {
    const auto out = tmp_dir("ckpt");
    const auto cfg = parse_config(desk_json(out));
    const auto ds = load_dataset(cfg.data, false, cfg.seeds.data);
    const auto run = train(cfg, ds);
    const auto ck = load_checkpoint(run.checkpoint_path);
    EXPECT_EQ(ck.version, Checkpoint::kVersion);
    EXPECT_EQ(ck.epochs_completed, 3);
    EXPECT_EQ(ck.history.size(), 3u);
    EXPECT_EQ(ck.permutation.size(), 4u);
    const auto restored = restore_model(ck);
    EXPECT_EQ(restored->parameters(), run.model->parameters());
    const auto x = ds.features[0];
    EXPECT_EQ(restored->predict(x, Backend::ideal()), run.model->predict(x, Backend::ideal()));
    std::ofstream(out / "junk.json") << "{\"format\": \"other\"}";
    EXPECT_THROW(load_checkpoint(out / "junk.json"), Error);
}

TEST(Experiment, PerformanceCsvShape) {
    const auto out = tmp_dir("perf");
    auto j = desk_json(out);
    j["epochs"] = 2;
    j["experiment"] = Json::parse(R"({"models": [
        {"name": "classical", "kind": "classical_ae", "n_qubits": 4, "depth": 1},
        {"name": "single", "kind": "single_chip_ae", "n_qubits": 4, "depth": 1}]})");
    const auto res = run_experiment(ExperimentKind::Performance, parse_config(j));
    EXPECT_EQ(res.csv_path, out / "performance.csv");
    const auto text = read_file(res.csv_path);
    EXPECT_EQ(text.substr(0, text.find('\n')), "model,epoch,metric,value");
    EXPECT_NE(text.find("classical,1,train_loss,"), std::string::npos);
    EXPECT_NE(text.find("single,2,val_loss,"), std::string::npos);
    EXPECT_NO_THROW(validate_rows(res.rows));
}

TEST(Experiment, GeneralizationRows) {
    const auto out = tmp_dir("gen");
    auto j = desk_json(out);
    j["epochs"] = 1;
    j["experiment"] = Json::parse(R"({"models": [{"name": "single", "kind": "single_chip_ae", "n_qubits": 4}]})");
    const auto res = run_experiment(ExperimentKind::Generalization, parse_config(j));
    double train_loss = NAN, test_loss = NAN, gen = NAN;
    for (const auto& r : res.rows) {
        if (r.metric == "final_train_loss") train_loss = r.value;
        if (r.metric == "test_loss") test_loss = r.value;
        if (r.metric == "gen_error") gen = r.value;
    }
    EXPECT_NEAR(gen, test_loss - train_loss, 1e-15);
}

TEST(Experiment, NoiseResilienceWithoutNoiseHasZeroQuantumError) {
    const auto out = tmp_dir("noise0");
    auto j = desk_json(out);
    j["epochs"] = 1;
    j["backend"] = Json{{"kind", "noisy"}, {"eps", 0.0}, {"gamma", 0.0}, {"n_cir", 0}};
    j["experiment"] = Json::parse(
        R"({"models": [{"name": "single", "kind": "single_chip_ae", "n_qubits": 2, "depth": 1}],
            "eval_samples": 4, "zne_models": []})");
    const auto res = run_experiment(ExperimentKind::NoiseResilience, parse_config(j));
    int seen = 0;
    for (const auto& r : res.rows) {
        if (r.metric == "quantum_error") {
            ++seen;
            EXPECT_NEAR(r.value, 0.0, 1e-12);
        }
    }
    EXPECT_EQ(seen, 1);
}

TEST(Experiment, BarrenPlateauMetricRows) {
    const auto out = tmp_dir("bp");
    auto j = desk_json(out);
    j["model"] = Json{{"kind", "multichip_ae_reduced"}, {"n_qubits", 4}, {"depth", 1}};
    j["experiment"] = Json{{"ks", {1, 2}}, {"samples", 20}};
    const auto res = run_experiment(ExperimentKind::BarrenPlateau, parse_config(j));
    EXPECT_EQ(res.metric_rows.size(), 6u);
    for (const auto& r : res.metric_rows) EXPECT_TRUE(std::isfinite(r.value));
    EXPECT_TRUE(fs::exists(res.csv_path));
}

TEST(Experiment, KindNames) {
    for (auto k : {ExperimentKind::Performance, ExperimentKind::Generalization, ExperimentKind::BarrenPlateau,
                   ExperimentKind::NoiseResilience})
        EXPECT_EQ(experiment_kind_from_string(to_string(k)), k);
    EXPECT_THROW(experiment_kind_from_string("ablation"), Error);
}
