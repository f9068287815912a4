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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mcvqc/backend.hpp"
#include "mcvqc/config.hpp"
#include "mcvqc/error.hpp"
#include "mcvqc/gradients.hpp"
#include "mcvqc/metrics.hpp"
#include "mcvqc/mitigation.hpp"
#include "mcvqc/models.hpp"
#include "mcvqc/train.hpp"

namespace py = pybind11;
using namespace mcvqc;

namespace {

Backend make_backend(double eps, double gamma, std::uint64_t n_cir, std::uint64_t seed) {
    if (eps == 0.0 && gamma == 0.0 && n_cir == 0) return Backend::ideal();
    return Backend::noisy({eps, gamma}, n_cir, seed);
}

StateVector state_from_numpy(py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast> a) {
    const auto n = static_cast<std::size_t>(a.size());
    int qubits = 0;
    while ((std::size_t{1} << qubits) < n) ++qubits;
    require((std::size_t{1} << qubits) == n, ErrorCode::DimensionMismatch, "state length must be a power of two");
    return StateVector(qubits, std::vector<Complex>(a.data(), a.data() + n));
}

std::string run_json(const RunRecord& run) {
    Json epochs = Json::array();
    for (const auto& e : run.epochs) epochs.push_back(to_json(e));
    return Json{{"model", run.model_name},
                {"final_train_loss", run.summary.final_train_loss},
                {"final_val_loss", run.summary.final_val_loss},
                {"test_loss", run.summary.test_loss},
                {"gen_error", run.summary.gen_error},
                {"stopped_early", run.stopped_early},
                {"checkpoint", run.checkpoint_path.string()},
                {"epochs", epochs}}
        .dump();
}

}  // namespace

PYBIND11_MODULE(_mcvqc, m) {
    m.doc() = "Multi-chip variational quantum circuit simulator core";

    // Message carries the error code prefix, e.g. "invalid_argument: ...".
    static PyObject* error_type = PyErr_NewException("mcvqc._mcvqc.Error", PyExc_ValueError, nullptr);
    m.attr("Error") = py::handle(error_type);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(error_type, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
        }
    });

    py::class_<CircuitSpec>(m, "Circuit")
        .def_readonly("num_qubits", &CircuitSpec::num_qubits)
        .def_readonly("num_encoding", &CircuitSpec::num_encoding)
        .def_readonly("num_trainable", &CircuitSpec::num_trainable)
        .def_property_readonly("gate_count", &CircuitSpec::gate_count)
        .def_property_readonly("trainable_gate_count", [](const CircuitSpec& c) { return c.trainable_ops.size(); });

    m.def("hardware_efficient_chip", &hardware_efficient_chip, py::arg("num_qubits"), py::arg("depth"));
    m.def("qcnn_chip", [](int n, int d) { return build_qcnn_chip(n, d).circuit; }, py::arg("num_qubits"),
          py::arg("depth"));
    m.def("qcnn_param_count", [](int n, int d) { return build_qcnn_chip(n, d).param_count; });
    m.def("fold_global", &fold_global, py::arg("circuit"), py::arg("scale"));

    m.def("state", [](const CircuitSpec& c, std::vector<double> enc, std::vector<double> theta) {
        const StateVector s = run_circuit(c, enc, theta);
        py::array_t<std::complex<double>> out(static_cast<py::ssize_t>(s.dimension()));
        std::copy(s.amplitudes().begin(), s.amplitudes().end(), out.mutable_data());
        return out;
    });
    m.def(
        "expectation",
        [](const CircuitSpec& c, std::vector<double> enc, std::vector<double> theta, double eps, double gamma,
           std::uint64_t n_cir, std::uint64_t seed) {
            return circuit_expectation(c, enc, theta, make_backend(eps, gamma, n_cir, seed));
        },
        py::arg("circuit"), py::arg("enc"), py::arg("theta"), py::arg("eps") = 0.0, py::arg("gamma") = 0.0,
        py::arg("n_cir") = 0, py::arg("seed") = 0);
    m.def(
        "gradient",
        [](const CircuitSpec& c, std::vector<double> enc, std::vector<double> theta, const std::string& method) {
            require(method == "adjoint" || method == "parameter_shift", ErrorCode::InvalidArgument,
                    "method must be adjoint or parameter_shift");
            const auto g = circuit_gradient(c, enc, theta,
                                            method == "adjoint" ? GradMethod::Adjoint : GradMethod::ParameterShift);
            return py::make_tuple(g.value, g.d_enc, g.d_theta);
        },
        py::arg("circuit"), py::arg("enc"), py::arg("theta"), py::arg("method") = "adjoint");

    m.def("meyer_wallach", [](py::array_t<std::complex<double>> a) { return meyer_wallach_q(state_from_numpy(a)); });
    m.def(
        "entangling_capability",
        [](int n, int chips, int samples, std::uint64_t seed, int depth) {
            require(chips >= 1 && n % chips == 0, ErrorCode::InvalidArgument, "n must be divisible by chips");
            const auto e = entangling_capability(hardware_efficient_chip(n / chips, depth), chips, samples, seed);
            return py::make_tuple(e.normalized, e.unnormalized);
        },
        py::arg("n"), py::arg("chips"), py::arg("samples"), py::arg("seed"), py::arg("depth") = 2);
    m.def(
        "gradient_variance",
        [](int n, int chips, int samples, std::uint64_t seed, int depth) {
            require(chips >= 1 && n % chips == 0, ErrorCode::InvalidArgument, "n must be divisible by chips");
            return gradient_variance(hardware_efficient_chip(n / chips, depth), chips, samples, seed);
        },
        py::arg("n"), py::arg("chips"), py::arg("samples"), py::arg("seed"), py::arg("depth") = 2);

    m.def(
        "zne_estimate",
        [](const std::vector<std::pair<double, double>>& pts, const std::string& method) {
            std::vector<ScalePoint> sp;
            for (const auto& [l, v] : pts) sp.push_back({l, v});
            return zne_estimate(sp, extrapolation_from_string(method));
        },
        py::arg("points"), py::arg("method") = "linear");
    m.def(
        "mitigated_expectation",
        [](const CircuitSpec& c, std::vector<double> enc, std::vector<double> theta, double eps, double gamma,
           std::vector<int> scales, const std::string& method, std::uint64_t n_cir, std::uint64_t seed) {
            ZneConfig z;
            z.scale_factors = std::move(scales);
            z.extrapolation = extrapolation_from_string(method);
            z.exact = n_cir == 0;
            if (n_cir > 0) z.n_cir = n_cir;
            z.validate();
            return mitigated_expectation(c, enc, theta, {eps, gamma}, z, seed).estimate;
        },
        py::arg("circuit"), py::arg("enc"), py::arg("theta"), py::arg("eps"), py::arg("gamma") = 0.0,
        py::arg("scales") = std::vector<int>{1, 3, 5}, py::arg("method") = "linear", py::arg("n_cir") = 0,
        py::arg("seed") = 0);

    m.def("_train", [](const std::string& config_json) {
        const TrainConfig cfg = parse_config(Json::parse(config_json));
        const Dataset ds = load_dataset(cfg.data, is_classification(cfg.model), cfg.seeds.data);
        py::gil_scoped_release release;
        return run_json(train(cfg, ds));
    });
    m.def("_inspect", [](const std::string& path) {
        const Checkpoint c = load_checkpoint(path);
        return Json{{"model_kind", c.model_kind},
                    {"input_dim", c.input_dim},
                    {"epochs_completed", c.epochs_completed},
                    {"parameters", c.parameters},
                    {"config", c.config}}
            .dump();
    });
    m.def("_predict", [](const std::string& path, std::vector<double> x) {
        return restore_model(load_checkpoint(path))->predict(x, Backend::ideal());
    });
}
