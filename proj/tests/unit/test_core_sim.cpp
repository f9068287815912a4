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

#include "mcvqc/circuit.hpp"
#include "mcvqc/error.hpp"
#include "mcvqc/statevector.hpp"
#include "oracles.hpp"

using namespace mcvqc;
using oracle::kPi;

TEST(StateVector, ZeroStateAndCapacity) {
    const auto s1 = init_zero_state(1);
    EXPECT_EQ(s1.dimension(), 2u);
    EXPECT_EQ(s1[0], Complex(1, 0));
    EXPECT_EQ(s1[1], Complex(0, 0));
    const auto s2 = init_zero_state(2);
    ASSERT_EQ(s2.dimension(), 4u);
    EXPECT_EQ(s2[0], Complex(1, 0));
    for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(s2[i], Complex(0, 0));
    try {
        init_zero_state(25);
        FAIL() << "expected capacity error";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Capacity);
    }
    EXPECT_THROW(init_zero_state(0), Error);
}

TEST(StateVector, RejectsUnnormalizedOrWrongLength) {
    EXPECT_THROW(StateVector(2, std::vector<Complex>(3)), Error);
}

TEST(ApplyGate, SimpleCases) {
    const std::vector<double> p{0.0};
    auto s = apply_gate(init_zero_state(1), GateOp::single(GateKind::RY, 0, 0), p);
    EXPECT_NEAR(std::abs(s[0] - Complex(1, 0)), 0.0, 1e-15);

    const std::vector<double> pi{kPi};
    s = apply_gate(init_zero_state(1), GateOp::single(GateKind::RY, 0, 0), pi);
    EXPECT_NEAR(expectation_z(s, 0), -1.0, 1e-12);

    // Control wire 0 stays |0>, so CRX does nothing for any angle.
    auto t = encode_ry(init_zero_state(2), std::vector<double>{0.0, 1.1});
    for (double a : {0.3, 1.7, -2.2}) {
        const std::vector<double> ang{a};
        const auto u = apply_gate(t, GateOp::two(GateKind::CRX, 0, 1, 0), ang);
        for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(u[i] - t[i]), 0.0, 1e-15);
    }
}

TEST(ApplyGate, IsingZZOnZeroKeepsZZParity) {
    for (double a : {0.0, 0.4, kPi / 3, 2.5, -1.0}) {
        const std::vector<double> ang{a};
        const auto s = apply_gate(init_zero_state(2), GateOp::two(GateKind::IsingZZ, 0, 1, 0), ang);
        const auto psi = oracle::to_vec(s);
        const double zz = (psi.adjoint() * oracle::embed(2, {{0, oracle::Z()}, {1, oracle::Z()}}) * psi)(0, 0).real();
        EXPECT_NEAR(zz, 1.0, 1e-12);
        // The explicit matrix is diagonal: only a phase on |00>.
        const auto u = oracle::gate_matrix(GateOp::two(GateKind::IsingZZ, 0, 1, 0), {a, 0, 0}, 2);
        EXPECT_NEAR(std::abs(s[0] - u(0, 0)), 0.0, 1e-12);
    }
}

TEST(ApplyGate, EveryKindMatchesDenseOracle) {
    std::mt19937_64 rng(11);
    const int n = 3;
    const GateOp gates[] = {
        GateOp::single(GateKind::RX, 1, 0),      GateOp::single(GateKind::RY, 2, 0),
        GateOp::single(GateKind::RZ, 0, 0),      GateOp::u3(1, 0),
        GateOp::two(GateKind::CRX, 2, 0, 0),     GateOp::two(GateKind::CRX, 0, 1, 0),
        GateOp::two(GateKind::IsingXX, 0, 2, 0), GateOp::two(GateKind::IsingYY, 2, 1, 0),
        GateOp::two(GateKind::IsingZZ, 1, 0, 0),
    };
    for (const auto& g : gates) {
        const auto angles = oracle::uniform_angles(3, rng);
        // Generic input state.
        auto s = encode_ry(init_zero_state(n), oracle::uniform_angles(n, rng));
        s = apply_gate(s, GateOp::two(GateKind::IsingXX, 0, 1, 0), std::vector<double>{0.7});
        s = apply_gate(s, GateOp::single(GateKind::RZ, 2, 0), std::vector<double>{1.3});
        const oracle::V expect = oracle::gate_matrix(g, g.angles(angles), n) * oracle::to_vec(s);
        const auto got = oracle::to_vec(apply_gate(s, g, angles));
        EXPECT_LT((got - expect).cwiseAbs().maxCoeff(), 1e-12) << to_string(g.kind);
    }
}

TEST(EncodeRy, Examples) {
    auto s = encode_ry(init_zero_state(3), std::vector<double>{0, 0, 0});
    EXPECT_NEAR(std::abs(s[0] - Complex(1, 0)), 0.0, 1e-15);
    s = encode_ry(init_zero_state(1), std::vector<double>{kPi});
    EXPECT_NEAR(expectation_z(s, 0), -1.0, 1e-12);
    s = encode_ry(init_zero_state(2), std::vector<double>{kPi / 2, kPi / 2});
    EXPECT_NEAR(expectation_z(s, 0), 0.0, 1e-12);
    EXPECT_NEAR(expectation_z(s, 1), 0.0, 1e-12);
    EXPECT_THROW(encode_ry(init_zero_state(2), std::vector<double>{1.0}), Error);
}

TEST(RunCircuit, EmptyTrainableEqualsEncoding) {
    const auto c = make_ry_encoding_circuit(3);
    const std::vector<double> x{0.3, 1.2, 2.9};
    const auto a = run_circuit(c, x, {});
    const auto b = encode_ry(init_zero_state(3), x);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(std::abs(a[i] - b[i]), 0.0, 1e-15);
}

TEST(RunCircuit, AllZeroAnglesGiveZeroState) {
    std::mt19937_64 rng(2);
    const auto c = oracle::random_circuit(3, 2, rng);
    const auto s = run_circuit(c, std::vector<double>(3, 0.0), std::vector<double>(c.num_trainable, 0.0));
    EXPECT_NEAR(std::abs(s[0] - Complex(1, 0)), 0.0, 1e-12);
}

TEST(RunCircuit, MatchesDenseMatrixChain) {
    std::mt19937_64 rng(5);
    for (int n = 1; n <= 4; ++n) {
        for (int rep = 0; rep < 10; ++rep) {
            const auto c = oracle::random_circuit(n, 2, rng);
            const auto enc = oracle::uniform_angles(n, rng);
            const auto theta = oracle::uniform_angles(c.num_trainable, rng);
            const oracle::V expect = oracle::circuit_unitary(c, enc, theta) * oracle::zero_state(n);
            const auto s = run_circuit(c, enc, theta);
            EXPECT_LT((oracle::to_vec(s) - expect).cwiseAbs().maxCoeff(), 1e-10);
            EXPECT_NEAR(s.norm(), 1.0, 1e-10);
            for (int w = 0; w < n; ++w) {
                const double z = expectation_z(s, w);
                EXPECT_LE(std::abs(z), 1.0 + 1e-12);
                EXPECT_NEAR(z, oracle::expect_z(expect, n, w), 1e-10);
            }
        }
    }
}

TEST(RunCircuit, SlotCountMismatchThrows) {
    const auto c = make_ry_encoding_circuit(2);
    EXPECT_THROW(run_circuit(c, std::vector<double>{1.0}, {}), Error);
    EXPECT_THROW(run_circuit(c, std::vector<double>{1.0, 2.0}, std::vector<double>{1.0}), Error);
}

TEST(CircuitSpec, ValidateRejectsBrokenInvariants) {
    auto c = make_ry_encoding_circuit(2);
    c.trainable_ops.push_back(GateOp::two(GateKind::CRX, 1, 1, 0));
    c.num_trainable = 1;
    EXPECT_THROW(c.validate(), Error);
    c.trainable_ops.back() = GateOp::single(GateKind::RX, 2, 0);
    EXPECT_THROW(c.validate(), Error);
    c.trainable_ops.back() = GateOp::single(GateKind::RX, 0, 1);
    EXPECT_THROW(c.validate(), Error);
    c.trainable_ops.back() = GateOp::single(GateKind::RX, 0, 0);
    c.observables = {};
    EXPECT_THROW(c.validate(), Error);
    c.observables = {0};
    EXPECT_NO_THROW(c.validate());
}

TEST(ExpectationZ, ClosedForm) {
    EXPECT_DOUBLE_EQ(expectation_z(init_zero_state(1), 0), 1.0);
    const auto one = StateVector(1, {Complex(0, 0), Complex(1, 0)});
    EXPECT_DOUBLE_EQ(expectation_z(one, 0), -1.0);
    for (double t : {0.0, kPi / 3, kPi / 2}) {
        const auto s = encode_ry(init_zero_state(1), std::vector<double>{t});
        EXPECT_NEAR(expectation_z(s, 0), std::cos(t), 1e-12);
    }
    EXPECT_THROW(expectation_z(init_zero_state(2), 2), Error);
}

TEST(Gates, InverseRestoresState) {
    std::mt19937_64 rng(9);
    auto s = encode_ry(init_zero_state(3), oracle::uniform_angles(3, rng));
    s = apply_gate(s, GateOp::two(GateKind::IsingYY, 0, 2, 0), std::vector<double>{0.9});
    for (auto k : {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::CRX, GateKind::IsingXX, GateKind::IsingYY,
                   GateKind::IsingZZ}) {
        const GateOp g = gate_arity(k) == 1 ? GateOp::single(k, 1, 0) : GateOp::two(k, 1, 2, 0);
        const double a = 1.234;
        const auto t = apply_gate(apply_gate(s, g, std::vector<double>{a}), g, std::vector<double>{-a});
        for (std::size_t i = 0; i < s.dimension(); ++i) EXPECT_NEAR(std::abs(t[i] - s[i]), 0.0, 1e-10) << to_string(k);
    }
}

TEST(Gates, U3EqualsPhasedEulerProduct) {
    // U3(t, p, l) = exp(i (p + l) / 2) RZ(p) RY(t) RZ(l)
    const double t = 0.7, p = 1.9, l = -0.4;
    const auto u = u3_matrix(t, p, l);
    const auto ref = oracle::u3(t, p, l);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) EXPECT_NEAR(std::abs(u[2 * r + c] - ref(r, c)), 0.0, 1e-14);
    const oracle::M euler = std::exp(Complex(0, (p + l) / 2)) * oracle::pauli_rotation(1, {{0, oracle::Z()}}, p) *
                            oracle::pauli_rotation(1, {{0, oracle::Y()}}, t) *
                            oracle::pauli_rotation(1, {{0, oracle::Z()}}, l);
    EXPECT_LT((euler - ref).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Gates, KindNamesRoundTrip) {
    for (auto k : {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::CRX, GateKind::U3, GateKind::IsingXX,
                   GateKind::IsingYY, GateKind::IsingZZ}) {
        EXPECT_EQ(gate_kind_from_string(to_string(k)), k);
    }
    EXPECT_THROW(gate_kind_from_string("CNOT"), Error);
}

TEST(TensorProduct, LowFactorOnLowWires) {
    const auto a = encode_ry(init_zero_state(1), std::vector<double>{kPi});  // |1>
    const auto b = init_zero_state(1);
    const auto ab = tensor_product(a, b);
    EXPECT_NEAR(std::abs(ab[1]), 1.0, 1e-12);  // wire 0 set
}
