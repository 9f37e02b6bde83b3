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

#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "flcu/estimators.hpp"
#include "flcu/lcu_diagonal.hpp"
#include "flcu/qaoa.hpp"
#include "flcu/qpd.hpp"
#include "flcu/su2.hpp"
#include "flcu/vqopt.hpp"

namespace flcu {

enum class Family { Penalty, Xy };

inline const char* family_name(Family f) {
    return f == Family::Penalty ? "penalty" : "xy";
}

inline Family parse_family(const std::string& s) {
    if (s == "penalty") {
        return Family::Penalty;
    }
    if (s == "xy") {
        return Family::Xy;
    }
    throw std::invalid_argument("unknown experiment family '" + s + "'");
}

inline int family_modes(Family f) {
    return f == Family::Penalty ? 5 : 7;
}

enum class Evaluator { Exact, Sampled };

inline constexpr int kMaxExactQubits = 14;

struct ExperimentConfig {
    int grid_2d = 21;
    int grid_nd = 9;
    int refine_budget = 500;
    int trotter_steps = 5;
    std::size_t xy_pool = 1000000;
    std::size_t xy_circuits = 1000;
    std::size_t xy_gamma_samples = 100000;
    double secondary_weight = 1e-5;  // XY objectives add this times P(optimal)
    Evaluator evaluator = Evaluator::Exact;
    long long shots = 32768;
    std::uint64_t seed = 1;
    int workers = 1;
};

struct ModeResult {
    Family family = Family::Penalty;
    int mode = 0;
    std::string label;
    ParamMap params;
    OptTrace trace;  // empty for evaluation-only modes
    MetricReport report;
    double gamma = 1.0;
    double eta = 1.0;
    std::vector<double> distribution;
    std::vector<double> coherent_reference;  // mode 2 only: coherent run at the same angles
    std::vector<std::pair<double, double>> gamma_log;  // mode 3: (angle, Gamma) per evaluation
};

/**
 * Runs the penalty (modes 1-5) and XY (modes 1-7) experiment sequences on one
 * instance. Results are memoized so later modes reuse the angles and Gamma
 * values of the modes they depend on.
 */
class ExperimentSession {
  public:
    ExperimentSession(DksInstance inst, ExperimentConfig cfg) : inst_(std::move(inst)), cfg_(cfg) {
        n_ = inst_.n();
        if (n_ > kMaxExactQubits) {
            throw std::invalid_argument("experiment modes need n <= 14 for statevector evaluation");
        }
        if (inst_.k < 1 || inst_.k >= n_) {
            throw std::invalid_argument("experiment modes need 0 < k < n");
        }
        theta_init_ = warm_start_theta(n_, inst_.k);
        opt_ = feasible_optimum(inst_);
        const std::size_t dim = std::size_t{1} << n_;
        values_.resize(dim);
        optimal_.assign(dim, 0);
        for (std::size_t x = 0; x < dim; ++x) {
            const auto b = BitString::from_index(x);
            values_[x] = inst_.penalty_objective(b);
            optimal_[x] = inst_.is_feasible(b) && std::abs(inst_.objective(b) - opt_.value) <= opt_.tol;
        }
        h1_ = ising_from_qubo(objective_qubo(inst_.graph));
        p0_ = warm_start_feasible_probability(n_, inst_.k);
    }

    const DksInstance& instance() const {
        return inst_;
    }
    const ExperimentConfig& config() const {
        return cfg_;
    }
    double optimum() const {
        return opt_.value;
    }
    double p0_feasible() const {
        return p0_;
    }

    const ModeResult& run(Family f, int mode) {
        if (mode < 1 || mode > family_modes(f)) {
            throw std::invalid_argument(std::string("mode out of range for family ") + family_name(f));
        }
        const auto key = std::make_pair(f, mode);
        auto it = results_.find(key);
        if (it != results_.end()) {
            return it->second;
        }
        ModeResult r = f == Family::Penalty ? run_penalty(mode) : run_xy(mode);
        r.family = f;
        r.mode = mode;
        return results_.emplace(key, std::move(r)).first->second;
    }

    // Exact (or sampled, per config) output distributions.

    std::vector<double> penalty_coherent(double beta, double gamma) const {
        const auto c = build_variant_circuit(spec(QaoaVariant::CoherentPenalty));
        return finish_probs(run_circuit(c, Statevector(n_), {{param::kBeta, beta}, {param::kGamma, gamma}}));
    }

    DiagonalLcu penalty_lcu(double gamma) const {
        // e^{-i gamma (-lambda (wt-k)^2)}: the penalty enters with angle -gamma lambda.
        return build_diagonal_lcu(hamming_penalty_values(n_, inst_.k), -gamma * inst_.lambda);
    }

    std::pair<std::vector<double>, double> penalty_lcu_distribution(double beta, double gamma) const {
        const auto lcu = penalty_lcu(gamma);
        const auto ch = channel_from_rz_layers(lcu, n_);
        const auto [prep, fin] = penalty_frame(beta, gamma);
        return {sample_if_needed(exact_lcu_distribution(ch, prep, &fin)), ch.gamma_cost};
    }

    std::vector<double> penalty_branch(double beta, double gamma, double theta) const {
        const auto c = build_variant_circuit(spec(QaoaVariant::SingleBranchPenalty));
        return finish_probs(
            run_circuit(c, Statevector(n_), {{param::kBeta, beta}, {param::kGamma, gamma}, {param::kTheta, theta}}));
    }

    std::vector<double> xy_coherent(double beta, double gamma) const {
        const auto c = build_variant_circuit(spec(QaoaVariant::CoherentXyTrotter));
        return finish_probs(run_circuit(c, Statevector(n_), {{param::kBeta, beta}, {param::kGamma, gamma}}));
    }

    /// Pool for a mixer angle; cached because it depends on beta only.
    const Su2Pool& xy_pool(double beta) const {
        std::lock_guard<std::mutex> lock(*pool_mutex_);
        auto it = pools_.find(beta);
        if (it == pools_.end()) {
            auto pool = build_su2_pool(n_, beta, cfg_.xy_pool, cfg_.xy_circuits, cfg_.xy_gamma_samples, cfg_.seed,
                                       cfg_.workers);
            // Keep only the selected branches; full pools are large and mode 3 builds many.
            std::vector<Su2Branch> kept;
            std::map<std::size_t, std::size_t> remap;
            for (auto& idx : pool.selected) {
                auto [pos, fresh] = remap.try_emplace(idx, kept.size());
                if (fresh) {
                    kept.push_back(pool.branches[idx]);
                }
                idx = pos->second;
            }
            pool.branches = std::move(kept);
            pool.sample_probs.clear();
            it = pools_.emplace(beta, std::move(pool)).first;
        }
        return it->second;
    }

    std::pair<std::vector<double>, double> xy_lcu_distribution(double beta, double gamma) const {
        const auto& pool = xy_pool(beta);
        const auto ch = channel_from_su2_pool(pool);
        Circuit prep = warm_start_circuit(n_, theta_init_);
        prep.append(cost_layer(h1_, Angle(gamma)));
        return {sample_if_needed(exact_lcu_distribution(ch, prep)), pool.gamma_hat};
    }

    /// Single XY branch; a nullopt beta means no trailing mixer.
    std::vector<double> xy_branch(double gamma, const EulerAngles& g, std::optional<double> beta = std::nullopt) const {
        QaoaSpec s = spec(QaoaVariant::SingleBranchXy);
        s.xy_branch_mixer = beta.has_value();
        // Without the mixer the last R_Z sits right before measurement.
        s.drop_final_rz = !beta.has_value();
        ParamMap p{{param::kGamma, gamma}, {param::kAlpha, g.alpha}, {param::kVartheta, g.theta}, {param::kChi, g.chi}};
        if (beta) {
            p[param::kBeta] = *beta;
        }
        return finish_probs(run_circuit(build_variant_circuit(s), Statevector(n_), p));
    }

    double expectation_of(const std::vector<double>& probs) const {
        return expectation(values_, probs);
    }
    double cvar_of(const std::vector<double>& probs, double eta) const {
        return cvar(values_, probs, std::min(1.0, eta), Tail::Upper);
    }
    double p_optimal_of(const std::vector<double>& probs) const {
        double s = 0.0;
        for (std::size_t x = 0; x < probs.size(); ++x) {
            s += optimal_[x] ? probs[x] : 0.0;
        }
        return s;
    }

  private:
    QaoaSpec spec(QaoaVariant v) const {
        QaoaSpec s;
        s.instance = &inst_;
        s.variant = v;
        s.theta_init = theta_init_;
        s.trotter_steps = cfg_.trotter_steps;
        return s;
    }

    std::pair<Circuit, Circuit> penalty_frame(double beta, double gamma) const {
        Circuit prep = warm_start_circuit(n_, theta_init_);
        prep.append(cost_layer(h1_, Angle(gamma)));
        return {prep, warm_start_mixer(n_, Angle(beta), theta_init_)};
    }

    std::vector<double> sample_if_needed(std::vector<double> probs) const {
        if (cfg_.evaluator == Evaluator::Exact) {
            return probs;
        }
        // Common random numbers: every evaluation reuses the same stream.
        auto rng = stream_rng(cfg_.seed, 0x5a3d);
        const auto s = sample_from_distribution(probs, n_, cfg_.shots, rng);
        std::vector<double> out(probs.size(), 0.0);
        for (const auto& [bits, w] : s.marginal()) {
            out[bits.index()] = w / s.total_weight();
        }
        return out;
    }

    std::vector<double> finish_probs(const Statevector& s) const {
        return sample_if_needed(measurement_distribution(s));
    }

    OptProblem problem(std::vector<std::string> names, Objective obj) const {
        OptProblem p;
        for (const auto& nm : names) {
            p.bounds.push_back(default_bound(nm));
        }
        p.objective = std::move(obj);
        p.grid_points = names.size() <= 2 ? cfg_.grid_2d : cfg_.grid_nd;
        p.refine_budget = cfg_.refine_budget;
        p.workers = cfg_.workers;
        return p;
    }

    static ParamMap to_params(const OptTrace& t) {
        ParamMap p;
        for (std::size_t i = 0; i < t.names.size(); ++i) {
            p[t.names[i]] = t.best_params[i];
        }
        return p;
    }

    ModeResult finish(std::string label, std::vector<double> probs, double gamma, double eta) const {
        ModeResult r;
        r.label = std::move(label);
        r.gamma = gamma;
        r.eta = eta;
        r.report = metric_report(probs, inst_, opt_, gamma, std::min(1.0, eta));
        r.distribution = std::move(probs);
        return r;
    }

    ModeResult run_penalty(int mode) {
        switch (mode) {
            case 1: {
                auto p = problem({param::kBeta, param::kGamma}, [this](const std::vector<double>& x) {
                    return expectation_of(penalty_coherent(x[0], x[1]));
                });
                auto trace = optimize(p);
                auto r = finish("coherent QAOA, <H>", penalty_coherent(trace.best_params[0], trace.best_params[1]),
                                1.0, 1.0);
                r.params = to_params(trace);
                r.trace = std::move(trace);
                return r;
            }
            case 2: {
                const auto& m1 = run(Family::Penalty, 1);
                const double b = m1.params.at(param::kBeta), g = m1.params.at(param::kGamma);
                auto [probs, gam] = penalty_lcu_distribution(b, g);
                auto r = finish("Fourier LCU at mode-1 angles", std::move(probs), gam, 1.0 / gam);
                r.params = m1.params;
                r.coherent_reference = penalty_coherent(b, g);
                return r;
            }
            case 3: {
                std::vector<std::pair<double, double>> log;
                std::mutex log_mutex;
                auto p = problem({param::kBeta, param::kGamma}, [&](const std::vector<double>& x) {
                    auto [probs, gam] = penalty_lcu_distribution(x[0], x[1]);
                    {
                        std::lock_guard<std::mutex> lock(log_mutex);
                        log.emplace_back(x[1], gam);
                    }
                    return cvar_of(probs, 1.0 / gam);
                });
                const auto& m1 = run(Family::Penalty, 1);
                auto trace = optimize(p, {{m1.params.at(param::kBeta), m1.params.at(param::kGamma)}});
                auto [probs, gam] = penalty_lcu_distribution(trace.best_params[0], trace.best_params[1]);
                auto r = finish("Fourier LCU, CVaR", std::move(probs), gam, 1.0 / gam);
                r.params = to_params(trace);
                r.trace = std::move(trace);
                std::sort(log.begin(), log.end());
                r.gamma_log = std::move(log);
                return r;
            }
            case 4: {
                const double g3 = run(Family::Penalty, 3).gamma;
                const auto& m1 = run(Family::Penalty, 1);
                const auto& m3 = run(Family::Penalty, 3);
                auto p = problem({param::kBeta, param::kGamma, param::kTheta}, [&](const std::vector<double>& x) {
                    return cvar_of(penalty_branch(x[0], x[1], x[2]), 1.0 / g3);
                });
                std::vector<std::vector<double>> starts;
                for (const auto* m : {&m1, &m3}) {
                    const auto lcu = penalty_lcu(m->params.at(param::kGamma));
                    for (int j = 0; j <= n_; ++j) {
                        starts.push_back({m->params.at(param::kBeta), m->params.at(param::kGamma), lcu.thetas[j]});
                    }
                }
                auto trace = optimize(p, starts);
                const auto& x = trace.best_params;
                auto r = finish("single LCU branch, CVaR", penalty_branch(x[0], x[1], x[2]), g3, 1.0 / g3);
                r.params = to_params(trace);
                r.trace = std::move(trace);
                return r;
            }
            case 5: {
                const double g3 = run(Family::Penalty, 3).gamma;
                const auto& m1 = run(Family::Penalty, 1);
                auto p = problem({param::kBeta, param::kGamma}, [&](const std::vector<double>& x) {
                    return cvar_of(penalty_coherent(x[0], x[1]), 1.0 / g3);
                });
                auto trace = optimize(p, {{m1.params.at(param::kBeta), m1.params.at(param::kGamma)}});
                auto r = finish("coherent QAOA, CVaR", penalty_coherent(trace.best_params[0], trace.best_params[1]),
                                g3, 1.0 / g3);
                r.params = to_params(trace);
                r.trace = std::move(trace);
                return r;
            }
        }
        throw std::invalid_argument("penalty mode out of range");
    }

    double xy_objective(const std::vector<double>& probs, double eta) const {
        return cvar_of(probs, eta) + cfg_.secondary_weight * p_optimal_of(probs);
    }

    ModeResult coherent_xy(const std::string& label, double eta, double gamma_report,
                           const std::vector<std::vector<double>>& starts) {
        auto p = problem({param::kBeta, param::kGamma},
                         [&](const std::vector<double>& x) { return xy_objective(xy_coherent(x[0], x[1]), eta); });
        auto trace = optimize(p, starts);
        auto r = finish(label, xy_coherent(trace.best_params[0], trace.best_params[1]), gamma_report, eta);
        r.params = to_params(trace);
        r.trace = std::move(trace);
        return r;
    }

    ModeResult run_xy(int mode) {
        switch (mode) {
            case 1:
                return coherent_xy("coherent XY-QAOA, CVaR", p0_, 1.0, {});
            case 2: {
                const auto& m1 = run(Family::Xy, 1);
                const double b = m1.params.at(param::kBeta), g = m1.params.at(param::kGamma);
                auto [probs, gam] = xy_lcu_distribution(b, g);
                auto r = finish("sampled SU(2) LCU at mode-1 angles", std::move(probs), gam, p0_ / gam);
                r.params = m1.params;
                r.coherent_reference = xy_coherent(b, g);
                return r;
            }
            case 3: {
                std::vector<std::pair<double, double>> log;
                std::mutex log_mutex;
                auto p = problem({param::kBeta, param::kGamma}, [&](const std::vector<double>& x) {
                    auto [probs, gam] = xy_lcu_distribution(x[0], x[1]);
                    {
                        std::lock_guard<std::mutex> lock(log_mutex);
                        log.emplace_back(x[0], gam);
                    }
                    return xy_objective(probs, p0_ / gam);
                });
                const auto& m1 = run(Family::Xy, 1);
                auto trace = optimize(p, {{m1.params.at(param::kBeta), m1.params.at(param::kGamma)}});
                auto [probs, gam] = xy_lcu_distribution(trace.best_params[0], trace.best_params[1]);
                auto r = finish("sampled SU(2) LCU, CVaR", std::move(probs), gam, p0_ / gam);
                r.params = to_params(trace);
                r.trace = std::move(trace);
                std::sort(log.begin(), log.end());
                r.gamma_log = std::move(log);
                return r;
            }
            case 4: {
                const double g3 = run(Family::Xy, 3).gamma;
                const double eta = p0_ / g3;
                auto p = problem({param::kGamma, param::kVartheta, param::kChi}, [&](const std::vector<double>& x) {
                    return xy_objective(xy_branch(x[0], {0.0, x[1], x[2]}), eta);
                });
                // Candidates: every selected mode-2 branch, and the best
                // penalty branch rewritten as one Euler rotation.
                std::vector<std::vector<double>> starts;
                const auto& m2 = run(Family::Xy, 2);
                const auto& pool = xy_pool(m2.params.at(param::kBeta));
                std::vector<std::size_t> sel = pool.selected;
                std::sort(sel.begin(), sel.end());
                sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
                for (auto i : sel) {
                    const auto& g = pool.branches[i].g;
                    starts.push_back({m2.params.at(param::kGamma), g.theta, g.chi});
                }
                const auto& pen = run(Family::Penalty, 4).params;
                const auto d = euler_from_single_qubit(
                    penalty_branch_unitary(pen.at(param::kTheta), pen.at(param::kBeta), theta_init_));
                starts.push_back({pen.at(param::kGamma), d.angles.theta, d.angles.chi});
                auto trace = optimize(p, starts);
                const auto& x = trace.best_params;
                auto r = finish("single SU(2) branch, CVaR", xy_branch(x[0], {0.0, x[1], x[2]}), g3, eta);
                r.params = to_params(trace);
                r.trace = std::move(trace);
                return r;
            }
            case 5: {
                const double g3 = run(Family::Xy, 3).gamma;
                const auto& m1 = run(Family::Xy, 1);
                return coherent_xy("coherent XY-QAOA, CVaR at LCU Gamma", p0_ / g3, g3,
                                   {{m1.params.at(param::kBeta), m1.params.at(param::kGamma)}});
            }
            case 6: {
                const double gp = run(Family::Penalty, 3).gamma;
                const auto& m1 = run(Family::Xy, 1);
                return coherent_xy("coherent XY-QAOA, CVaR at penalty Gamma", 1.0 / gp, gp,
                                   {{m1.params.at(param::kBeta), m1.params.at(param::kGamma)}});
            }
            case 7: {
                const double gp = run(Family::Penalty, 3).gamma;
                const double eta = 1.0 / gp;
                auto p = problem({param::kBeta, param::kGamma, param::kAlpha, param::kVartheta, param::kChi},
                                 [&](const std::vector<double>& x) {
                                     return xy_objective(xy_branch(x[1], {x[2], x[3], x[4]}, x[0]), eta);
                                 });
                // The penalty single branch is the point (beta, gamma, theta, 0, 0).
                const auto& pen = run(Family::Penalty, 4).params;
                std::vector<std::vector<double>> starts{
                    {pen.at(param::kBeta), pen.at(param::kGamma), pen.at(param::kTheta), 0.0, 0.0}};
                auto trace = optimize(p, starts);
                const auto& x = trace.best_params;
                auto r = finish("single SU(2) branch with mixer, CVaR at penalty Gamma",
                                xy_branch(x[1], {x[2], x[3], x[4]}, x[0]), gp, eta);
                r.params = to_params(trace);
                r.trace = std::move(trace);
                return r;
            }
        }
        throw std::invalid_argument("XY mode out of range");
    }

    DksInstance inst_;
    ExperimentConfig cfg_;
    int n_ = 0;
    double theta_init_ = 0.0;
    OptimumInfo opt_;
    std::vector<double> values_;
    std::vector<char> optimal_;
    IsingModel h1_;
    double p0_ = 0.0;
    std::map<std::pair<Family, int>, ModeResult> results_;
    mutable std::map<double, Su2Pool> pools_;
    std::unique_ptr<std::mutex> pool_mutex_ = std::make_unique<std::mutex>();
};

}  // namespace flcu
