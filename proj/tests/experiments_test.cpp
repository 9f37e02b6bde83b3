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

#include "flcu/experiments.hpp"

using namespace flcu;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.grid_2d = 7;
    c.grid_nd = 4;
    c.refine_budget = 60;
    c.xy_pool = 5000;
    c.xy_circuits = 40;
    c.xy_gamma_samples = 2000;
    c.seed = 3;
    return c;
}

ExperimentSession& session() {
    static ExperimentSession s(build_dks(random_regular_graph(8, 3, 21), 3), small_config());
    return s;
}

double l1_squared(const std::vector<Complex>& c) {
    double s = 0.0;
    for (const auto& v : c) {
        s += std::abs(v);
    }
    return s * s;
}

}  // namespace

TEST(penalty_modes, mode2_gamma_matches_coefficients) {
    auto& s = session();
    const auto& m2 = s.run(Family::Penalty, 2);
    const double g = m2.params.at(param::kGamma);
    const auto& inst = s.instance();
    const auto lcu = build_diagonal_lcu(hamming_penalty_values(inst.n(), inst.k), -g * inst.lambda);
    EXPECT_NEAR(m2.gamma, l1_squared(lcu.coeffs), 1e-9);
    EXPECT_EQ(m2.params, s.run(Family::Penalty, 1).params);
}

TEST(penalty_modes, mode2_dominates_scaled_coherent) {
    const auto& m2 = session().run(Family::Penalty, 2);
    ASSERT_EQ(m2.distribution.size(), m2.coherent_reference.size());
    EXPECT_GE(domination_slack(m2.distribution, m2.coherent_reference, m2.gamma), -1e-9);
    const auto& inst = session().instance();
    const auto r = cvar_sandwich_check(m2.coherent_reference, m2.distribution, m2.gamma, [&](std::uint64_t x) {
        return inst.penalty_objective(BitString::from_index(x));
    });
    EXPECT_GE(r.lower_slack, -1e-9);
    EXPECT_GE(r.upper_slack, -1e-9);
}

TEST(penalty_modes, mode3_logs_gamma_per_angle) {
    auto& s = session();
    const auto& m3 = s.run(Family::Penalty, 3);
    ASSERT_FALSE(m3.gamma_log.empty());
    EXPECT_EQ(m3.gamma_log.size(), m3.trace.log.size());
    for (std::size_t i = 0; i < m3.gamma_log.size(); i += 17) {
        const auto [g, gam] = m3.gamma_log[i];
        EXPECT_NEAR(gam, l1_squared(s.penalty_lcu(g).coeffs), 1e-9);
    }
    EXPECT_NEAR(m3.gamma, l1_squared(s.penalty_lcu(m3.params.at(param::kGamma)).coeffs), 1e-9);
}

TEST(penalty_modes, single_branch_beats_mixture_at_equal_gamma) {
    auto& s = session();
    const auto& m2 = s.run(Family::Penalty, 2);
    const auto& m4 = s.run(Family::Penalty, 4);
    EXPECT_GE(m4.report.cvar_upper, s.cvar_of(m2.distribution, 1.0 / m4.gamma) - 1e-9);
    EXPECT_EQ(m4.gamma, s.run(Family::Penalty, 3).gamma);
    EXPECT_EQ(s.run(Family::Penalty, 5).gamma, m4.gamma);
}

TEST(penalty_modes, reports_are_consistent) {
    auto& s = session();
    for (int m = 1; m <= 5; ++m) {
        const auto& r = s.run(Family::Penalty, m);
        EXPECT_LE(r.report.p_optimal, r.report.p_feasible + 1e-15);
        EXPECT_LE(r.report.p_feasible, 1.0 + 1e-12);
        if (!r.trace.log.empty()) {
            EXPECT_GE(r.trace.best_value, r.trace.log.front().value);
        }
    }
}

TEST(penalty_modes, single_branch_dominance_for_linear_objective) {
    auto& s = session();
    const double beta = 0.4, gamma = 0.7;
    const auto lcu = s.penalty_lcu(gamma);
    double avg = 0.0, best = 0.0;
    for (int j = 0; j <= lcu.m; ++j) {
        const double p = s.p_optimal_of(s.penalty_branch(beta, gamma, lcu.thetas[j]));
        avg += lcu.branch_probs[j] * p;
        best = std::max(best, p);
    }
    EXPECT_GE(best, avg - 1e-12);
    EXPECT_NEAR(avg, s.p_optimal_of(s.penalty_lcu_distribution(beta, gamma).first), 1e-12);
}

TEST(xy_modes, all_modes_run) {
    auto& s = session();
    for (int m = 1; m <= 7; ++m) {
        const auto& r = s.run(Family::Xy, m);
        EXPECT_EQ(r.mode, m);
        EXPECT_EQ(r.distribution.size(), 256u);
        EXPECT_GT(r.gamma, 0.0);
    }
    // Coherent XY keeps the warm-start feasibility.
    for (int m : {1, 5, 6}) {
        EXPECT_NEAR(s.run(Family::Xy, m).report.p_feasible, s.p0_feasible(), 1e-9);
    }
    EXPECT_NEAR(s.run(Family::Xy, 1).eta, s.p0_feasible(), 1e-15);
    EXPECT_NEAR(s.run(Family::Xy, 6).gamma, s.run(Family::Penalty, 3).gamma, 1e-15);
    EXPECT_THROW(s.run(Family::Xy, 8), std::invalid_argument);
    EXPECT_THROW(s.run(Family::Penalty, 6), std::invalid_argument);
}

TEST(xy_modes, mode7_not_worse_than_penalty_branch) {
    // The penalty single branch is a point of the mode-7 family.
    auto& s = session();
    const auto& m7 = s.run(Family::Xy, 7);
    const auto& p4 = s.run(Family::Penalty, 4).params;
    const auto probs = s.penalty_branch(p4.at(param::kBeta), p4.at(param::kGamma), p4.at(param::kTheta));
    const double eta = m7.eta;
    EXPECT_GE(m7.trace.best_value, s.cvar_of(probs, eta) + 1e-5 * s.p_optimal_of(probs) - 1e-9);
}

TEST(experiment_session, deterministic_rerun) {
    ExperimentSession a(build_dks(random_regular_graph(8, 3, 21), 3), small_config());
    const auto& r = a.run(Family::Xy, 3);
    const auto& ref = session().run(Family::Xy, 3);
    EXPECT_EQ(r.params, ref.params);
    EXPECT_EQ(r.distribution, ref.distribution);
    EXPECT_EQ(r.gamma, ref.gamma);
}

TEST(experiment_session, sampled_evaluator) {
    auto cfg = small_config();
    cfg.evaluator = Evaluator::Sampled;
    cfg.shots = 4096;
    ExperimentSession s(build_dks(random_regular_graph(8, 3, 21), 3), cfg);
    const auto& r = s.run(Family::Penalty, 1);
    double total = 0.0;
    for (double p : r.distribution) {
        total += p;
        EXPECT_NEAR(p * 4096, std::round(p * 4096), 1e-9);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}
