// Copyright 2026 The flcu Authors
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

#include <cmath>

#include "flcu/circuit.hpp"
#include "flcu/density_matrix.hpp"
#include "flcu/statevector.hpp"

using namespace flcu;

namespace {

double phase_distance(const Statevector& a, const Statevector& b) {
    return 1.0 - std::abs(inner_product(a, b));
}

Circuit random_circuit(int n, int gates, Rng& rng) {
    Circuit c(n);
    std::uniform_int_distribution<int> kind(0, 8), qubit(0, n - 1);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int i = 0; i < gates; ++i) {
        const int a = qubit(rng);
        int b = qubit(rng);
        while (n > 1 && b == a) {
            b = qubit(rng);
        }
        switch (n > 1 ? kind(rng) : kind(rng) % 5) {
            case 0: c.add(gates::rz(a, angle(rng))); break;
            case 1: c.add(gates::ry(a, angle(rng))); break;
            case 2: c.add(gates::rx(a, angle(rng))); break;
            case 3: c.add(gates::h(a)); break;
            case 4: c.add(gates::p(a, angle(rng))); break;
            case 5: c.add(gates::rzz(a, b, angle(rng))); break;
            case 6: c.add(gates::cz(a, b)); break;
            case 7: c.add(gates::swap(a, b)); break;
            default: c.add(gates::rxy(a, b, angle(rng))); break;
        }
    }
    return c;
}

}  // namespace

TEST(statevector, construction) {
    Statevector s(3);
    EXPECT_EQ(s.size(), 8u);
    EXPECT_EQ(s[0], Complex(1, 0));
    EXPECT_THROW(Statevector(0), std::invalid_argument);
    EXPECT_THROW(Statevector(17), std::invalid_argument);
    EXPECT_THROW(Statevector(2, std::vector<Complex>(3)), std::invalid_argument);
}

TEST(apply_gate, ry_pi_flips) {
    Statevector s(1);
    apply_gate(s, gates::ry(0, kPi));
    EXPECT_NEAR(std::abs(s[1]), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(s[0]), 0.0, 1e-12);
}

TEST(apply_gate, rz_keeps_plus_probabilities) {
    for (double t : {0.0, 0.3, 1.7, -2.9}) {
        Statevector s(1);
        apply_gate(s, gates::h(0));
        apply_gate(s, gates::rz(0, t));
        auto p = measurement_distribution(s);
        EXPECT_NEAR(p[0], 0.5, 1e-12);
        EXPECT_NEAR(p[1], 0.5, 1e-12);
    }
}

TEST(apply_gate, rz_convention) {
    Statevector s = Statevector::uniform(1);
    apply_gate(s, gates::rz(0, 0.8));
    EXPECT_NEAR(std::abs(s[0] - std::polar(1 / std::sqrt(2.0), -0.4)), 0, 1e-12);
    EXPECT_NEAR(std::abs(s[1] - std::polar(1 / std::sqrt(2.0), 0.4)), 0, 1e-12);
}

TEST(apply_gate, cz_on_11) {
    auto s = Statevector::basis(2, 3);
    apply_gate(s, gates::cz(0, 1));
    EXPECT_NEAR(std::abs(s[3] + 1.0), 0.0, 1e-15);
}

TEST(apply_gate, rxy_block) {
    // |01> in little-endian is index 1 (qubit 0 set).
    auto s = Statevector::basis(2, 1);
    apply_gate(s, gates::rxy(0, 1, 0.6));
    EXPECT_NEAR(std::abs(s[1] - std::cos(0.6)), 0, 1e-12);
    EXPECT_NEAR(std::abs(s[2] - Complex(0, -std::sin(0.6))), 0, 1e-12);
    auto t = Statevector::basis(2, 3);
    apply_gate(t, gates::rxy(0, 1, 0.6));
    EXPECT_NEAR(std::abs(t[3] - 1.0), 0, 1e-12);
}

TEST(apply_gate, swap_moves_bits) {
    auto s = Statevector::basis(3, 0b001);
    apply_gate(s, gates::swap(0, 2));
    EXPECT_NEAR(std::abs(s[0b100]), 1.0, 1e-15);
}

TEST(apply_gate, anti_control) {
    auto s = Statevector::basis(2, 0);
    apply_gate(s, gates::controlled(gates::ry(0, kPi), 1, false));
    EXPECT_NEAR(std::abs(s[1]), 1.0, 1e-12);
    auto t = Statevector::basis(2, 2);
    apply_gate(t, gates::controlled(gates::ry(0, kPi), 1, false));
    EXPECT_NEAR(std::abs(t[2]), 1.0, 1e-12);
}

TEST(apply_gate, errors) {
    Statevector s(2);
    EXPECT_THROW(apply_gate(s, gates::rz(2, 0.1)), std::out_of_range);
    EXPECT_THROW(apply_gate(s, gates::rz(0, Angle::named("beta"))), std::invalid_argument);
    EXPECT_THROW(apply_gate(s, gates::rz(0, std::nan(""))), std::invalid_argument);
    Circuit c(2);
    EXPECT_THROW(c.add(gates::rzz(0, 0, 0.1)), std::invalid_argument);
    EXPECT_THROW(c.add(gates::rz(5, 0.1)), std::out_of_range);
}

TEST(apply_diagonal_phase, zero_function) {
    Rng rng(3);
    auto s = random_state(3, rng);
    auto t = s;
    apply_diagonal_phase(t, [](std::uint64_t) { return 0.0; }, 1.234);
    EXPECT_LT(max_abs_difference(s, t), 1e-15);
}

TEST(apply_diagonal_phase, negates_one) {
    Statevector s = Statevector::uniform(1);
    apply_diagonal_phase(s, [](std::uint64_t x) { return static_cast<double>(x); }, kPi);
    EXPECT_NEAR(std::abs(s[1] + 1 / std::sqrt(2.0)), 0, 1e-12);
}

TEST(apply_diagonal_phase, matches_level_loop) {
    Rng rng(5);
    auto s = random_state(3, rng);
    auto t = s;
    apply_diagonal_phase(t, [](std::uint64_t x) { return std::pow(hamming_weight(x) - 1.0, 2); }, 0.7);
    for (std::uint64_t x = 0; x < 8; ++x) {
        int w = 0;
        for (int q = 0; q < 3; ++q) {
            w += (x >> q) & 1;
        }
        const Complex expect = s[x] * std::exp(Complex(0, -0.7 * (w - 1) * (w - 1)));
        EXPECT_NEAR(std::abs(t[x] - expect), 0, 1e-12);
    }
}

TEST(apply_diagonal_phase, commutes_and_adds) {
    Rng rng(7);
    auto s = random_state(4, rng);
    auto f1 = [](std::uint64_t x) { return std::sin(static_cast<double>(x)); };
    auto f2 = [](std::uint64_t x) { return 0.1 * static_cast<double>(x * x); };
    auto a = s;
    apply_diagonal_phase(a, f1, 0.9);
    apply_diagonal_phase(a, f2, 0.9);
    auto b = s;
    apply_diagonal_phase(b, [&](std::uint64_t x) { return f1(x) + f2(x); }, 0.9);
    EXPECT_LT(max_abs_difference(a, b), 1e-12);
}

TEST(measurement_distribution, point_and_uniform) {
    auto p = measurement_distribution(Statevector(4));
    EXPECT_EQ(p[0], 1.0);
    auto u = measurement_distribution(Statevector::uniform(4));
    for (double v : u) {
        EXPECT_NEAR(v, 1.0 / 16, 1e-15);
    }
}

TEST(measurement_distribution, warm_start_weight) {
    const int n = 12;
    Statevector s(n);
    const double t = 2 * std::asin(std::sqrt(4.0 / 12));
    for (int q = 0; q < n; ++q) {
        apply_gate(s, gates::ry(q, t));
    }
    auto w = hamming_weight_distribution(measurement_distribution(s), n);
    EXPECT_NEAR(w[4], 495 * std::pow(1 / 3.0, 4) * std::pow(2 / 3.0, 8), 1e-12);
    EXPECT_NEAR(w[4], 0.23845, 1e-4);
}

TEST(sample_bitstrings, point_mass) {
    auto s = sample_bitstrings(Statevector::basis(3, 5), 100, 1);
    EXPECT_EQ(s.size(), 1u);
    EXPECT_EQ(s.weight_of(BitString::from_index(5)), 100.0);
}

TEST(sample_bitstrings, uniform_frequencies) {
    const long long shots = 1000000;
    auto s = sample_bitstrings(Statevector::uniform(2), shots, 42);
    const double sigma = std::sqrt(shots * 0.25 * 0.75);
    for (std::uint64_t x = 0; x < 4; ++x) {
        EXPECT_LT(std::abs(s.weight_of(BitString::from_index(x)) - shots * 0.25), 5 * sigma);
    }
}

TEST(sample_bitstrings, deterministic) {
    Rng rng(9);
    auto st = random_state(5, rng);
    EXPECT_EQ(sample_bitstrings(st, 5000, 11), sample_bitstrings(st, 5000, 11));
    EXPECT_FALSE(sample_bitstrings(st, 5000, 11) == sample_bitstrings(st, 5000, 12));
    EXPECT_THROW(sample_bitstrings(st, 0, 1), std::invalid_argument);
}

TEST(run_circuit, empty_and_involution) {
    Rng rng(13);
    auto s = random_state(1, rng);
    EXPECT_LT(max_abs_difference(run_circuit(Circuit(1), s), s), 1e-15);
    Circuit c(1);
    c.add(gates::h(0)).add(gates::h(0));
    EXPECT_LT(max_abs_difference(run_circuit(c, s), s), 1e-12);
}

TEST(run_circuit, binds_parameters) {
    Circuit c(1);
    c.add(gates::ry(0, Angle::named("t", 2.0)));
    auto s = run_circuit(c, Statevector(1), {{"t", kPi / 2}});
    EXPECT_NEAR(std::abs(s[1]), 1.0, 1e-12);
    EXPECT_THROW(run_circuit(c, Statevector(1)), std::invalid_argument);
    EXPECT_EQ(c.parameters(), std::set<std::string>{"t"});
}

TEST(run_circuit, unitarity_random) {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + trial % 10;
        auto c = random_circuit(n, 50, rng);
        auto s = run_circuit(c, random_state(n, rng));
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-9);
    }
}

TEST(run_circuit, linearity) {
    Rng rng(19);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 4;
        auto c = random_circuit(n, 30, rng);
        auto a = random_state(n, rng), b = random_state(n, rng);
        const Complex x(0.3, -0.2), y(-0.7, 0.4);
        auto lhs = run_circuit(c, x * a + y * b);
        auto rhs = x * run_circuit(c, a) + y * run_circuit(c, b);
        EXPECT_LT(max_abs_difference(lhs, rhs), 1e-12);
    }
}

TEST(circuit_unitary, matches_known_matrices) {
    Circuit c(1);
    c.add(gates::ry(0, 0.7));
    EXPECT_LT((circuit_unitary(c) - ry_matrix(0.7)).cwiseAbs().maxCoeff(), 1e-14);
    Circuit d(2);
    d.add(gates::rzz(0, 1, 0.5));
    auto u = circuit_unitary(d);
    EXPECT_NEAR(std::abs(u(0, 0) - std::polar(1.0, -0.25)), 0, 1e-14);
    EXPECT_NEAR(std::abs(u(1, 1) - std::polar(1.0, 0.25)), 0, 1e-14);
}

TEST(density_matrix, pure_state_properties) {
    Rng rng(23);
    auto rho = DensityMatrix::from_pure(random_state(3, rng));
    EXPECT_TRUE(rho.is_hermitian());
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    EXPECT_THROW(DensityMatrix::zero(9), std::invalid_argument);
}

TEST(phase_distance, global_phase_ignored) {
    Rng rng(29);
    auto s = random_state(3, rng);
    auto t = std::polar(1.0, 0.77) * s;
    EXPECT_LT(phase_distance(s, t), 1e-12);
    EXPECT_LT(distance_up_to_phase(s, t), 1e-6);
}
