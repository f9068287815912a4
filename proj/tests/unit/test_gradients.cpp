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

#include "mcvqc/backend.hpp"
#include "mcvqc/ensemble.hpp"
#include "mcvqc/error.hpp"
#include "mcvqc/gradients.hpp"
#include "mcvqc/models.hpp"
#include "oracles.hpp"

using namespace mcvqc;
using oracle::kPi;

namespace {

CircuitSpec ry_circuit() {
    CircuitSpec c;
    c.num_qubits = 1;
    c.num_trainable = 1;
    c.trainable_ops = {GateOp::single(GateKind::RY, 0, 0)};
    return c;
}

double rel_err(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

std::vector<double> fd_theta(const CircuitSpec& c, const std::vector<double>& enc, std::vector<double> theta,
                             const Backend& backend, double h) {
    std::vector<double> out(theta.size());
    auto f = [&](std::span<const double> t) { return circuit_expectation(c, enc, t, backend); };
    for (std::size_t s = 0; s < theta.size(); ++s) out[s] = finite_diff_oracle(f, theta, static_cast<int>(s), h);
    return out;
}

// Mean-aggregated k-chip model with no encoder or head.
EnsembleModel mean_ensemble(int k, int l, int depth, std::uint64_t seed) {
    EnsembleModel m = build_multichip_ae_full(k * l, l, depth, seed);
    m.aggregator = AggregatorSpec{};
    m.aggregator.kind = Aggregator::Mean;
    m.head.reset();
    m.validate();
    return m;
}

}  // namespace

TEST(ParamShift, ClosedFormRy) {
    const auto c = ry_circuit();
    EXPECT_NEAR(param_shift(c, {}, std::vector<double>{0.0}, 0), 0.0, 1e-14);
    EXPECT_NEAR(param_shift(c, {}, std::vector<double>{kPi / 2}, 0), -1.0, 1e-14);
    EXPECT_THROW(param_shift(c, {}, std::vector<double>{0.0}, 1), Error);
}

TEST(ParamShift, MatchesFiniteDifferenceOnRandomCircuits) {
    double worst = 0;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        std::mt19937_64 rng(seed);
        const auto c = oracle::random_circuit(4, 2, rng);
        const auto enc = oracle::uniform_angles(4, rng);
        const auto theta = oracle::uniform_angles(c.num_trainable, rng);
        std::vector<double> ps(theta.size());
        for (std::size_t s = 0; s < theta.size(); ++s) ps[s] = param_shift(c, enc, theta, static_cast<int>(s));
        worst = std::max(worst, rel_err(ps, fd_theta(c, enc, theta, Backend::ideal(), 1e-4)));
    }
    EXPECT_LT(worst, 1e-5);
}

TEST(ParamShift, CrxUsesFourTermRule) {
    // <Z_1> after RX(a) on wire 0 then CRX(t) 0->1 is cos^2(a/2) + sin^2(a/2) cos(t).
    CircuitSpec c;
    c.num_qubits = 2;
    c.num_trainable = 2;
    c.trainable_ops = {GateOp::single(GateKind::RX, 0, 0), GateOp::two(GateKind::CRX, 0, 1, 1)};
    c.observables = {1};
    for (double t : {0.3, 1.1, 2.7}) {
        const double a = 1.3;
        const double expect = -std::sin(a / 2) * std::sin(a / 2) * std::sin(t);
        EXPECT_NEAR(param_shift(c, {}, std::vector<double>{a, t}, 1), expect, 1e-12);
    }
}

TEST(ParamShift, EncodingSourceMatchesFiniteDifference) {
    std::mt19937_64 rng(4);
    const auto c = oracle::random_circuit(3, 2, rng);
    const auto enc = oracle::uniform_angles(3, rng);
    const auto theta = oracle::uniform_angles(c.num_trainable, rng);
    auto f = [&](std::span<const double> e) { return circuit_expectation(c, e, theta, Backend::ideal()); };
    for (int s = 0; s < 3; ++s) {
        EXPECT_NEAR(param_shift(c, enc, theta, s, Backend::ideal(), ParamSource::Encoding),
                    finite_diff_oracle(f, enc, s, 1e-5), 1e-8);
    }
}

TEST(ParamShift, NoisyBackendMatchesFiniteDifference) {
    std::mt19937_64 rng(6);
    const auto c = oracle::random_circuit(3, 1, rng);
    const auto enc = oracle::uniform_angles(3, rng);
    const auto theta = oracle::uniform_angles(c.num_trainable, rng);
    const auto noisy = Backend::noisy({0.03, 0.02});
    std::vector<double> ps(theta.size());
    for (std::size_t s = 0; s < theta.size(); ++s) ps[s] = param_shift(c, enc, theta, static_cast<int>(s), noisy);
    EXPECT_LT(rel_err(ps, fd_theta(c, enc, theta, noisy, 1e-4)), 1e-6);
}

TEST(FiniteDiff, Examples) {
    auto sq = [](std::span<const double> x) { return x[0] * x[0]; };
    EXPECT_NEAR(finite_diff_oracle(sq, std::vector<double>{1.0}, 0, 1e-4), 2.0, 1e-7);
    auto konst = [](std::span<const double>) { return 3.0; };
    EXPECT_DOUBLE_EQ(finite_diff_oracle(konst, std::vector<double>{0.5}, 0, 1e-4), 0.0);
    auto cosine = [](std::span<const double> x) { return std::cos(x[0]); };
    EXPECT_NEAR(finite_diff_oracle(cosine, std::vector<double>{0.0}, 0, 1e-4), 0.0, 1e-8);
    EXPECT_THROW(finite_diff_oracle(sq, std::vector<double>{1.0}, 0, 0.0), Error);
}

TEST(Adjoint, AgreesWithParameterShift) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(100 + seed);
        const auto c = oracle::random_circuit(4, 2, rng);
        const auto enc = oracle::uniform_angles(4, rng);
        const auto theta = oracle::uniform_angles(c.num_trainable, rng);
        const auto adj = circuit_gradient(c, enc, theta, GradMethod::Adjoint);
        const auto ps = circuit_gradient(c, enc, theta, GradMethod::ParameterShift);
        EXPECT_NEAR(adj.value, ps.value, 1e-12);
        for (std::size_t i = 0; i < theta.size(); ++i) EXPECT_NEAR(adj.d_theta[i], ps.d_theta[i], 1e-10);
        for (std::size_t i = 0; i < enc.size(); ++i) EXPECT_NEAR(adj.d_enc[i], ps.d_enc[i], 1e-10);
    }
}

TEST(Adjoint, RejectsNoisyBackend) {
    const auto c = ry_circuit();
    EXPECT_THROW(circuit_gradient(c, {}, std::vector<double>{0.1}, GradMethod::Adjoint, Backend::noisy({0.1, 0})),
                 Error);
}

TEST(Gradients, Linearity) {
    // f and g read different wires of the same circuit.
    std::mt19937_64 rng(8);
    const auto c = oracle::random_circuit(3, 2, rng);
    const auto enc = oracle::uniform_angles(3, rng);
    const auto theta = oracle::uniform_angles(c.num_trainable, rng);
    const double a = 0.7, b = -1.9;
    auto cf = c;
    cf.observables = {0};
    auto cg = c;
    cg.observables = {2};
    const auto gf = circuit_gradient(cf, enc, theta, GradMethod::ParameterShift);
    const auto gg = circuit_gradient(cg, enc, theta, GradMethod::ParameterShift);
    auto combo = [&](std::span<const double> t) {
        return a * circuit_expectation(cf, enc, t, Backend::ideal()) +
               b * circuit_expectation(cg, enc, t, Backend::ideal());
    };
    for (std::size_t s = 0; s < theta.size(); ++s) {
        const double lhs = finite_diff_oracle(combo, theta, static_cast<int>(s), 1e-5);
        EXPECT_NEAR(lhs, a * gf.d_theta[s] + b * gg.d_theta[s], 1e-8);
    }
}

TEST(HybridBackward, ZeroUpstreamGivesZeroGradient) {
    const auto m = build_multichip_ae_reduced(6, 4, 2, 1, 3);
    const std::vector<double> x{0.1, 0.5, 0.2, 0.9, 0.3, 0.4};
    const auto fwd = forward_ensemble(m, x);
    const auto g = hybrid_backward(m, fwd, std::vector<double>(6, 0.0));
    ASSERT_EQ(g.size(), m.parameter_count());
    for (double v : g) EXPECT_EQ(v, 0.0);
}

TEST(HybridBackward, SingleChipChainRuleCollapse) {
    EnsembleModel m;
    m.label = "single";
    m.input_dim_ = 1;
    m.padded_dim = 1;
    m.partition = Partition::identity(1, 1);
    m.chip = make_ry_encoding_circuit(1);
    m.chip.trainable_ops = {GateOp::single(GateKind::RX, 0, 0)};
    m.chip.num_trainable = 1;
    m.thetas = {{0.7}};
    m.aggregator.kind = Aggregator::LinearMap;
    m.aggregator.map = LinearLayer::identity(1);
    m.validate();
    const std::vector<double> x{0.4};
    const auto fwd = forward_ensemble(m, x);
    const double upstream = -2.5;
    const auto g = hybrid_backward(m, fwd, std::vector<double>{upstream});
    EXPECT_NEAR(g[0], upstream * param_shift(m.chip, x, m.thetas[0], 0), 1e-12);
}

TEST(HybridBackward, TwoChipModelMatchesFiniteDifference) {
    auto m = build_multichip_ae_reduced(6, 4, 2, 2, 5);
    const std::vector<double> x{0.1, 0.5, 0.2, 0.9, 0.3, 0.4};
    const std::vector<double> target{0.3, 0.2, 0.8, 0.1, 0.0, 0.6};
    std::vector<double> grad(m.parameter_count(), 0.0);
    m.accumulate_gradient(x, target, LossKind::Mse, grad, {});
    const auto p0 = m.parameters();
    std::vector<double> fd(p0.size());
    auto loss_at = [&](std::span<const double> p) {
        auto copy = m;
        copy.set_parameters(p);
        return evaluate_loss(LossKind::Mse, copy.predict(x, Backend::ideal()), target).loss;
    };
    for (std::size_t i = 0; i < p0.size(); ++i) fd[i] = finite_diff_oracle(loss_at, p0, static_cast<int>(i), 1e-5);
    EXPECT_LT(rel_err(grad, fd), 1e-4);
}

TEST(HybridBackward, ParameterShiftMethodMatchesAdjoint) {
    auto m = build_multichip_ae_reduced(6, 4, 2, 1, 8);
    const std::vector<double> x{0.2, 0.1, 0.7, 0.3, 0.9, 0.5};
    const std::vector<double> target(6, 0.5);
    std::vector<double> ga(m.parameter_count(), 0.0), gp(m.parameter_count(), 0.0);
    m.accumulate_gradient(x, target, LossKind::Mse, ga, {GradMethod::Adjoint, Backend::ideal()});
    m.accumulate_gradient(x, target, LossKind::Mse, gp, {GradMethod::ParameterShift, Backend::ideal()});
    for (std::size_t i = 0; i < ga.size(); ++i) EXPECT_NEAR(ga[i], gp[i], 1e-10);
}

TEST(HybridBackward, ChipIndependenceUnderMeanAggregator) {
    auto m = mean_ensemble(3, 2, 2, 4);
    const std::vector<double> x{0.3, 0.6, 0.1, 0.8, 0.5, 0.2};
    const auto g0 = hybrid_backward(m, forward_ensemble(m, x), std::vector<double>{1.0});
    const std::size_t block = static_cast<std::size_t>(m.chip.num_trainable);
    m.thetas[1][0] += 0.9;
    m.thetas[2][3] -= 1.4;
    const auto g1 = hybrid_backward(m, forward_ensemble(m, x), std::vector<double>{1.0});
    for (std::size_t i = 0; i < block; ++i) EXPECT_EQ(g0[i], g1[i]);
    bool changed = false;
    for (std::size_t i = block; i < 3 * block; ++i) changed = changed || g0[i] != g1[i];
    EXPECT_TRUE(changed);
}

TEST(HybridBackward, StaleOrMissingCacheRejected) {
    auto m = build_multichip_ae_reduced(6, 4, 2, 1, 3);
    const std::vector<double> x(6, 0.3);
    try {
        hybrid_backward(m, ForwardResult{}, std::vector<double>(6, 1.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::StaleCache);
    }
    const auto fwd = forward_ensemble(m, x);
    auto p = m.parameters();
    p[0] += 0.1;
    m.set_parameters(p);
    try {
        hybrid_backward(m, fwd, std::vector<double>(6, 1.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::StaleCache);
    }
    EXPECT_THROW(hybrid_backward(m, forward_ensemble(m, x), std::vector<double>(5, 1.0)), Error);
}
