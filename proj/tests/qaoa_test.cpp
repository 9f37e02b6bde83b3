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

#include "flcu/density_matrix.hpp"
#include "flcu/qaoa.hpp"

using namespace flcu;

namespace {

double binomial_pmf(int n, int k, double p) {
    return static_cast<double>(binomial(n, k)) * std::pow(p, k) * std::pow(1 - p, n - k);
}

double weight_probability(const Statevector& s, int k) {
    const auto probs = measurement_distribution(s);
    return hamming_weight_distribution(probs, s.num_qubits())[k];
}

Statevector random_product_state(int n, Rng& rng) {
    Circuit c(n);
    for (int q = 0; q < n; ++q) {
        c.add(gates::ry(q, kPi * uniform01(rng)));
        c.add(gates::rz(q, kTwoPi * uniform01(rng)));
    }
    return run_circuit(c, Statevector(n));
}

Eigen::Matrix2cd haar_unitary(Rng& rng) {
    std::normal_distribution<double> g;
    Eigen::Matrix2cd z;
    for (int i = 0; i < 4; ++i) {
        z(i / 2, i % 2) = Complex(g(rng), g(rng));
    }
    Eigen::HouseholderQR<Eigen::Matrix2cd> qr(z);
    Eigen::Matrix2cd q = qr.householderQ();
    const Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < 2; ++i) {
        q.col(i) *= r(i, i) / std::abs(r(i, i));
    }
    return q;
}

double up_to_phase(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    const Complex t = (b.adjoint() * a).trace();
    const Complex ph = std::abs(t) > 0 ? t / std::abs(t) : Complex{1.0, 0.0};
    return (a - ph * b).cwiseAbs().maxCoeff();
}

Eigen::Matrix2cd rebuild(const EulerDecomposition& d) {
    return std::polar(1.0, d.phase) * rz_matrix(d.angles.alpha) * ry_matrix(d.angles.theta) * rz_matrix(d.angles.chi);
}

}  // namespace

TEST(warm_start_state, single_pair) {
    const auto s = warm_start_state(2, 1);
    for (std::size_t x = 0; x < 4; ++x) {
        EXPECT_NEAR(std::abs(s[x]), 0.5, 1e-12);
    }
    EXPECT_NEAR(weight_probability(s, 1), 0.5, 1e-12);
}

TEST(warm_start_state, feasible_probability_matches_binomial) {
    for (auto [n, k] : {std::pair{12, 4}, {8, 3}, {10, 5}}) {
        const double p = weight_probability(warm_start_state(n, k), k);
        EXPECT_NEAR(p, binomial_pmf(n, k, static_cast<double>(k) / n), 1e-12);
        EXPECT_NEAR(p, warm_start_feasible_probability(n, k), 1e-12);
    }
    EXPECT_NEAR(warm_start_feasible_probability(12, 4), 0.23845, 1e-4);
}

TEST(warm_start_state, large_instance_figure) {
    const double p = warm_start_feasible_probability(106, 35);
    EXPECT_NEAR(p, 0.0822, 5e-4);
    const auto dp = product_weight_distribution(std::vector<double>(106, 35.0 / 106));
    EXPECT_NEAR(dp[35], p, 1e-12);
    EXPECT_THROW(warm_start_theta(4, 5), std::invalid_argument);
}

TEST(cost_layer, zero_angle_is_identity) {
    const auto inst = build_dks(random_regular_graph(6, 3, 2), 2);
    Rng rng(3);
    const auto s = random_product_state(6, rng);
    const auto out = run_circuit(cost_layer(ising_from_qubo(inst.qubo)), s, {{param::kGamma, 0.0}});
    EXPECT_LT(max_abs_difference(out, s), 1e-12);
}

TEST(cost_layer, matches_diagonal_phase_oracle) {
    Graph g(2);
    g.add_edge(0, 1, 1.5);
    const auto inst = build_dks(g, 1);
    const auto ising = ising_from_qubo(inst.qubo);
    Rng rng(4);
    const auto s = random_state(2, rng);
    const double gamma = 0.83;
    Statevector expected = s;
    apply_diagonal_phase(expected, [&](std::uint64_t x) { return inst.qubo.evaluate(x); }, gamma);
    const auto out = run_circuit(cost_layer(ising), s, {{param::kGamma, gamma}});
    EXPECT_LT(distance_up_to_phase(out, expected), 1e-12);
}

TEST(cost_layer, halves_compose) {
    const auto inst = build_dks(random_regular_graph(12, 3, 5), 4);
    const auto c = cost_layer(ising_from_qubo(inst.qubo));
    Rng rng(5);
    const auto s = random_product_state(12, rng);
    const auto once = run_circuit(c, s, {{param::kGamma, 0.6}});
    const auto twice = run_circuit(c, run_circuit(c, s, {{param::kGamma, 0.3}}), {{param::kGamma, 0.3}});
    EXPECT_LT(max_abs_difference(once, twice), 1e-10);
}

TEST(warm_start_mixer, identities) {
    Rng rng(6);
    const auto s = random_state(3, rng);
    EXPECT_LT(max_abs_difference(run_circuit(warm_start_mixer(3, 0.0, 0.7), s), s), 1e-12);
    const auto a = run_circuit(warm_start_mixer(3, 0.4, 0.0), s);
    const auto b = run_circuit(rz_layer(3, 0.4), s);
    EXPECT_LT(max_abs_difference(a, b), 1e-12);
}

TEST(warm_start_mixer, single_qubit_matrix) {
    const double beta = 0.77, ti = 1.1;
    const Matrix u = circuit_unitary(warm_start_mixer(1, beta, ti));
    const Eigen::Matrix2cd expected = ry_matrix(ti) * rz_matrix(beta) * ry_matrix(-ti);
    EXPECT_LT((u - expected).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((u - penalty_branch_unitary(0.0, beta, ti)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(build_variant_circuit, penalty_branches_sum_to_coherent) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto inst = build_dks(random_regular_graph(8, 3, seed), 3);
        QaoaSpec spec{&inst, QaoaVariant::CoherentPenalty};
        const ParamMap params{{param::kBeta, 0.45}, {param::kGamma, -0.31 + 0.2 * seed}};
        const auto coherent = run_circuit(build_variant_circuit(spec), Statevector(8), params);

        const auto lcu = build_diagonal_lcu(hamming_penalty_values(8, 3), -params.at(param::kGamma) * inst.lambda);
        const auto ch = channel_from_rz_layers(lcu, 8);
        spec.variant = QaoaVariant::PenaltyLcu;
        Statevector sum(8, std::vector<Complex>(256, Complex{0.0, 0.0}));
        for (std::size_t j = 0; j < ch.size(); ++j) {
            BranchData b;
            b.theta = lcu.thetas[j];
            sum += ch.coeffs[j] * run_circuit(build_variant_circuit(spec, b), Statevector(8), params);
        }
        EXPECT_LT(distance_up_to_phase(sum, coherent), 1e-8);
        EXPECT_NEAR(std::abs(inner_product(sum, sum)), 1.0, 1e-8);
    }
}

TEST(build_variant_circuit, missing_branch_data) {
    const auto inst = build_dks(random_regular_graph(4, 3, 0), 2);
    EXPECT_THROW(build_variant_circuit({&inst, QaoaVariant::PenaltyLcu}), std::invalid_argument);
    EXPECT_THROW(build_variant_circuit({&inst, QaoaVariant::XyLcu}), std::invalid_argument);
    EXPECT_THROW(parse_variant("bogus"), std::invalid_argument);
    EXPECT_EQ(parse_variant("xy-lcu"), QaoaVariant::XyLcu);
}

TEST(build_variant_circuit, trotter_at_zero_beta) {
    const auto inst = build_dks(random_regular_graph(6, 3, 1), 2);
    const ParamMap params{{param::kBeta, 0.0}, {param::kGamma, 0.4}};
    const auto a = run_circuit(build_variant_circuit({&inst, QaoaVariant::CoherentXyTrotter}), Statevector(6), params);
    Circuit ref = warm_start_circuit(6, warm_start_theta(6, 2));
    ref.append(cost_layer(ising_from_qubo(objective_qubo(inst.graph))));
    const auto b = run_circuit(ref, Statevector(6), params);
    EXPECT_LT(max_abs_difference(a, b), 1e-12);
}

TEST(xy_trotter, second_order_accuracy) {
    const int n = 6;
    const double beta = 0.2;
    Rng rng(7);
    const auto s = random_product_state(n, rng);
    const Statevector exact = from_eigen(n, xy_unitary_dense(n, beta) * to_eigen(s));
    auto err = [&](int steps) {
        return 1.0 - fidelity(run_circuit(xy_trotter(n, Angle(beta), steps), s), exact);
    };
    const double e5 = err(5), e10 = err(10);
    EXPECT_GE(1.0 - e5, 0.999);
    // Infidelity scales as the square of the amplitude error: ~16x per doubling.
    const double amp_ratio = std::sqrt(e5 / e10);
    EXPECT_GT(amp_ratio, 3.0);
    EXPECT_LT(amp_ratio, 5.0);
}

TEST(xy_trotter, conserves_hamming_weight) {
    const int n = 8;
    Rng rng(8);
    const auto s = random_product_state(n, rng);
    const auto before = hamming_weight_distribution(measurement_distribution(s), n);
    for (double beta : {0.3, 1.7, -2.2}) {
        const auto out = run_circuit(xy_trotter(n, Angle(beta)), s);
        const auto after = hamming_weight_distribution(measurement_distribution(out), n);
        for (int k = 0; k <= n; ++k) {
            EXPECT_NEAR(after[k], before[k], 1e-9);
        }
    }
}

TEST(euler_from_single_qubit, examples) {
    const auto id = euler_from_single_qubit(Eigen::Matrix2cd::Identity());
    EXPECT_NEAR(id.angles.alpha, 0.0, 1e-12);
    EXPECT_NEAR(id.angles.theta, 0.0, 1e-12);
    EXPECT_NEAR(id.angles.chi, 0.0, 1e-12);
    EXPECT_NEAR(id.phase, 0.0, 1e-12);

    const auto ry = euler_from_single_qubit(ry_matrix(0.7));
    EXPECT_NEAR(ry.angles.alpha, 0.0, 1e-12);
    EXPECT_NEAR(ry.angles.theta, 0.7, 1e-12);
    EXPECT_NEAR(ry.angles.chi, 0.0, 1e-12);

    const Eigen::Matrix2cd u = penalty_branch_unitary(1.1, 0.4, 0.9);
    const auto d = euler_from_single_qubit(u);
    EXPECT_LT((rebuild(d) - u).cwiseAbs().maxCoeff(), 1e-9);

    Eigen::Matrix2cd bad = Eigen::Matrix2cd::Identity();
    bad(0, 1) = 0.3;
    EXPECT_THROW(euler_from_single_qubit(bad), std::invalid_argument);
}

TEST(euler_from_single_qubit, degenerate_canonical_chi) {
    const auto a = euler_from_single_qubit(rz_matrix(0.9) * rz_matrix(0.4));
    EXPECT_NEAR(a.angles.theta, 0.0, 1e-12);
    EXPECT_NEAR(a.angles.chi, 0.0, 1e-12);
    EXPECT_NEAR(a.angles.alpha, 1.3, 1e-12);
    const Eigen::Matrix2cd flip = rz_matrix(0.5) * ry_matrix(kPi) * rz_matrix(0.2);
    const auto b = euler_from_single_qubit(flip);
    EXPECT_NEAR(b.angles.theta, kPi, 1e-12);
    EXPECT_NEAR(b.angles.chi, 0.0, 1e-12);
    EXPECT_LT((rebuild(b) - flip).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(euler_from_single_qubit, haar_round_trip) {
    Rng rng(12);
    for (int t = 0; t < 1000; ++t) {
        const Eigen::Matrix2cd u = haar_unitary(rng);
        const auto d = euler_from_single_qubit(u);
        EXPECT_GE(d.angles.theta, 0.0);
        EXPECT_LE(d.angles.theta, kPi);
        EXPECT_LT((rebuild(d) - u).cwiseAbs().maxCoeff(), 1e-9);
        EXPECT_LT(up_to_phase(euler_matrix(d.angles), u), 1e-9);
    }
}

TEST(build_variant_circuit, single_branch_xy_covers_penalty_branch) {
    const auto inst = build_dks(random_regular_graph(6, 3, 4), 2);
    const double ti = warm_start_theta(6, 2);
    const double theta = 0.8, beta = -0.5, gamma = 0.35;
    const auto d = euler_from_single_qubit(penalty_branch_unitary(theta, beta, ti));
    const auto pen = run_circuit(build_variant_circuit({&inst, QaoaVariant::SingleBranchPenalty}), Statevector(6),
                                 {{param::kBeta, beta}, {param::kGamma, gamma}, {param::kTheta, theta}});
    const auto xy = run_circuit(build_variant_circuit({&inst, QaoaVariant::SingleBranchXy}), Statevector(6),
                                {{param::kGamma, gamma},
                                 {param::kAlpha, d.angles.alpha},
                                 {param::kVartheta, d.angles.theta},
                                 {param::kChi, d.angles.chi}});
    EXPECT_LT(distance_up_to_phase(pen, xy), 1e-9);
}

TEST(swap_network_cost_layer, matches_logical_cost_layer) {
    const auto hh = heavy_hex_swap_graph(1, 1, 3);
    const auto inst = build_dks(hh.graph, 4);
    const auto ising = ising_from_qubo(inst.qubo);
    // Penalty couplings are all-to-all; keep only the couplings the network realizes.
    IsingModel sparse = ising;
    sparse.j.clear();
    for (const auto& e : hh.graph.edges()) {
        sparse.j[{e.i, e.j}] = ising.j.at({e.i, e.j});
    }
    const auto net = swap_network_cost_layer(hh, sparse, Angle(0.7));
    EXPECT_EQ(net.rzz_count, hh.graph.num_edges());
    Rng rng(13);
    const auto s = random_product_state(12, rng);
    const auto physical = run_circuit(net.circuit, s);
    const auto direct = run_circuit(cost_layer(sparse, Angle(0.7)), s);
    EXPECT_LT(max_abs_difference(relabel_to_logical(physical, net.logical_at), direct), 1e-10);
}
