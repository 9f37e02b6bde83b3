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

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "flcu/problems.hpp"
#include "flcu/sample_set.hpp"

namespace flcu {

enum class Tail { Lower, Upper };

inline const char* tail_name(Tail t) {
    return t == Tail::Lower ? "lower" : "upper";
}

/**
 * Mean of the worst (Lower) or best (Upper) alpha-fraction of the mass.
 * The atom straddling the boundary contributes only the mass needed to reach
 * alpha, so the result does not depend on how ties are ordered.
 */
inline double cvar(std::span<const double> values, std::span<const double> weights, double alpha,
                   Tail tail = Tail::Upper) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("cvar: alpha must lie in (0, 1]");
    }
    if (values.size() != weights.size()) {
        throw std::invalid_argument("cvar: values and weights differ in length");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) {
            throw std::invalid_argument("cvar: weights must be nonnegative");
        }
        total += w;
    }
    if (!(total > 0.0)) {
        throw std::invalid_argument("cvar: total weight must be positive");
    }
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return tail == Tail::Upper ? values[a] > values[b] : values[a] < values[b];
    });
    const double target = alpha * total;
    double mass = 0.0, acc = 0.0;
    for (std::size_t i : order) {
        if (weights[i] == 0.0) {
            continue;
        }
        const double take = std::min(weights[i], target - mass);
        acc += take * values[i];
        mass += take;
        if (mass >= target) {
            break;
        }
    }
    return acc / mass;
}

/// Weighted mean.
inline double expectation(std::span<const double> values, std::span<const double> weights) {
    double s = 0.0, w = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        s += values[i] * weights[i];
        w += weights[i];
    }
    if (!(w > 0.0)) {
        throw std::invalid_argument("expectation: total weight must be positive");
    }
    return s / w;
}

struct SandwichResult {
    double mean = 0.0;        // E[f(X)] under the coherent distribution
    double cvar_lower = 0.0;  // lower-tail CVaR_{1/Gamma} under the LCU distribution
    double cvar_upper = 0.0;
    double lower_slack = 0.0;  // mean - cvar_lower
    double upper_slack = 0.0;  // cvar_upper - mean
};

/// Checks CVaR_{1/Gamma}(f(X~)) <= E[f(X)] <= upper CVaR_{1/Gamma}(f(X~)) for
/// exact distributions indexed by basis state.
inline SandwichResult cvar_sandwich_check(std::span<const double> coherent, std::span<const double> lcu, double gamma,
                                          const std::function<double(std::uint64_t)>& f) {
    if (coherent.size() != lcu.size()) {
        throw std::invalid_argument("sandwich check: distributions differ in length");
    }
    if (!(gamma >= 1.0 - 1e-12)) {
        throw std::invalid_argument("sandwich check: Gamma must be >= 1");
    }
    std::vector<double> values(coherent.size());
    for (std::size_t x = 0; x < values.size(); ++x) {
        values[x] = f(x);
    }
    const double alpha = std::min(1.0, 1.0 / gamma);
    SandwichResult r;
    r.mean = expectation(values, coherent);
    r.cvar_lower = cvar(values, lcu, alpha, Tail::Lower);
    r.cvar_upper = cvar(values, lcu, alpha, Tail::Upper);
    r.lower_slack = r.mean - r.cvar_lower;
    r.upper_slack = r.cvar_upper - r.mean;
    return r;
}

/// Table-style metrics of one output distribution. Conditional fields are
/// empty when the distribution has no feasible support.
struct MetricReport {
    double expectation = 0.0;  // <H>, penalty objective
    double gamma = 1.0;
    double eta = 1.0;
    double cvar_lower = 0.0;
    double cvar_upper = 0.0;
    double p_feasible = 0.0;
    double p_optimal = 0.0;
    std::optional<double> expectation_given_feasible;
    std::optional<double> p_optimal_given_feasible;
};

/// Optimum used for p_optimal: the best feasible objective value.
struct OptimumInfo {
    double value = 0.0;
    double tol = 1e-9;
};

inline OptimumInfo feasible_optimum(const DksInstance& inst) {
    return {solve_exact(objective_qubo(inst.graph), SolveMode::FeasibleOnly, inst.k).best_value, 1e-9};
}

namespace detail {

inline MetricReport report_from_atoms(const std::vector<BitString>& atoms, const std::vector<double>& weights,
                                      const DksInstance& inst, const OptimumInfo& opt, double gamma, double eta) {
    std::vector<double> values(atoms.size());
    double total = 0.0, feas = 0.0, optimal = 0.0, feas_value = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        values[i] = inst.penalty_objective(atoms[i]);
        total += weights[i];
        if (inst.is_feasible(atoms[i])) {
            feas += weights[i];
            feas_value += weights[i] * values[i];
            if (std::abs(values[i] - opt.value) <= opt.tol) {
                optimal += weights[i];
            }
        }
    }
    MetricReport r;
    r.gamma = gamma;
    r.eta = eta;
    r.expectation = expectation(values, weights);
    r.cvar_lower = cvar(values, weights, eta, Tail::Lower);
    r.cvar_upper = cvar(values, weights, eta, Tail::Upper);
    r.p_feasible = feas / total;
    r.p_optimal = optimal / total;
    if (feas > 0.0) {
        r.expectation_given_feasible = feas_value / feas;
        r.p_optimal_given_feasible = optimal / feas;
    }
    return r;
}

}  // namespace detail

/// Metrics of an exact distribution over basis indices. eta defaults to 1/Gamma.
inline MetricReport metric_report(std::span<const double> probs, const DksInstance& inst, const OptimumInfo& opt,
                                  double gamma = 1.0, std::optional<double> eta = std::nullopt) {
    std::vector<BitString> atoms;
    std::vector<double> weights;
    for (std::size_t x = 0; x < probs.size(); ++x) {
        if (probs[x] > 0.0) {
            atoms.push_back(BitString::from_index(x));
            weights.push_back(probs[x]);
        }
    }
    return detail::report_from_atoms(atoms, weights, inst, opt, gamma, eta.value_or(std::min(1.0, 1.0 / gamma)));
}

/// Metrics of sampled outcomes; branch labels are marginalized.
inline MetricReport metric_report(const SampleSet& samples, const DksInstance& inst, const OptimumInfo& opt,
                                  double gamma = 1.0, std::optional<double> eta = std::nullopt) {
    std::vector<BitString> atoms;
    std::vector<double> weights;
    for (const auto& [bits, w] : samples.marginal()) {
        if (w > 0.0) {
            atoms.push_back(bits);
            weights.push_back(w);
        }
    }
    return detail::report_from_atoms(atoms, weights, inst, opt, gamma, eta.value_or(std::min(1.0, 1.0 / gamma)));
}

/// Probability mass per (objective value, feasibility) bin.
struct ValueBin {
    double value = 0.0;
    bool feasible = false;
    double mass = 0.0;
};

inline std::vector<ValueBin> value_histogram(std::span<const double> probs, const DksInstance& inst) {
    std::map<std::pair<double, bool>, double> bins;
    for (std::size_t x = 0; x < probs.size(); ++x) {
        if (probs[x] == 0.0) {
            continue;
        }
        const auto b = BitString::from_index(x);
        // Objective values are sums of edge weights; round away float noise.
        const double v = std::round(inst.penalty_objective(b) * 1e9) / 1e9;
        bins[{v, inst.is_feasible(b)}] += probs[x];
    }
    std::vector<ValueBin> out;
    for (const auto& [key, m] : bins) {
        out.push_back({key.first, key.second, m});
    }
    return out;
}

}  // namespace flcu
