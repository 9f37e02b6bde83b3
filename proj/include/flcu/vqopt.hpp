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
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "flcu/bits.hpp"
#include "flcu/random.hpp"

namespace flcu {

struct ParamBound {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
};

/// Default boxes by parameter role.
inline ParamBound default_bound(const std::string& name) {
    if (name == "beta" || name == "gamma") {
        return {name, -kPi, kPi};
    }
    if (name == "theta" || name == "alpha") {
        return {name, 0.0, kTwoPi};
    }
    if (name == "vartheta") {
        return {name, 0.0, kPi};
    }
    if (name == "chi") {
        return {name, 0.0, 2.0 * kTwoPi};
    }
    throw std::invalid_argument("no default bound for parameter '" + name + "'");
}

using Objective = std::function<double(const std::vector<double>&)>;

/// Maximization problem over a box.
struct OptProblem {
    std::vector<ParamBound> bounds;
    Objective objective;
    int grid_points = 0;        // per axis; 0 picks 21 (<= 2 axes) or 9
    std::size_t max_grid = 200000;
    int refine_budget = 500;    // local refinement evaluations
    double tolerance = 1e-4;    // simplex size at which refinement stops
    int workers = 1;            // grid evaluations only

    std::size_t dim() const {
        return bounds.size();
    }

    int resolved_grid_points() const {
        if (grid_points > 0) {
            return grid_points;
        }
        return dim() <= 2 ? 21 : 9;
    }

    void validate() const {
        if (bounds.empty()) {
            throw std::invalid_argument("optimization problem has no parameters");
        }
        for (const auto& b : bounds) {
            if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi)) {
                throw std::invalid_argument("bounds for '" + b.name + "' must be finite with lo < hi");
            }
        }
        if (!objective) {
            throw std::invalid_argument("optimization problem has no objective");
        }
    }
};

struct Evaluation {
    std::vector<double> params;
    double value = 0.0;
    double best_so_far = 0.0;
};

struct OptTrace {
    std::vector<std::string> names;
    std::vector<Evaluation> log;
    std::vector<double> best_params;
    double best_value = -std::numeric_limits<double>::infinity();
    std::size_t grid_evaluations = 0;

    void record(const std::vector<double>& x, double v) {
        if (log.empty() || v > best_value) {
            best_value = v;
            best_params = x;
        }
        log.push_back({x, v, best_value});
    }
};

inline std::vector<double> clamp_to_box(std::vector<double> x, const std::vector<ParamBound>& b) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::clamp(x[i], b[i].lo, b[i].hi);
    }
    return x;
}

/// Full Cartesian grid with endpoints included, logged in row-major order
/// (last axis fastest).
inline OptTrace grid_search(const OptProblem& problem) {
    problem.validate();
    const int pts = problem.resolved_grid_points();
    if (pts < 2) {
        throw std::invalid_argument("grid needs at least two points per axis");
    }
    const std::size_t d = problem.dim();
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) {
        if (total > problem.max_grid / static_cast<std::size_t>(pts)) {
            throw std::invalid_argument("grid exceeds the evaluation budget");
        }
        total *= static_cast<std::size_t>(pts);
    }
    std::vector<std::vector<double>> points(total, std::vector<double>(d));
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t r = idx;
        for (std::size_t a = d; a-- > 0;) {
            const auto k = r % static_cast<std::size_t>(pts);
            r /= static_cast<std::size_t>(pts);
            const auto& b = problem.bounds[a];
            points[idx][a] = b.lo + (b.hi - b.lo) * static_cast<double>(k) / (pts - 1);
        }
    }
    std::vector<double> values(total);
    parallel_for(total, problem.workers, [&](std::size_t i) { values[i] = problem.objective(points[i]); });
    OptTrace trace;
    for (const auto& b : problem.bounds) {
        trace.names.push_back(b.name);
    }
    for (std::size_t i = 0; i < total; ++i) {
        trace.record(points[i], values[i]);
    }
    trace.grid_evaluations = total;
    return trace;
}

/**
 * Nelder-Mead refinement (maximizing) from `start`, clamped to the box.
 * The initial simplex steps 5% of each box width along every axis. Stops when
 * all vertices lie within `tolerance` of the best one or the budget runs out.
 * Evaluations are appended to `trace`.
 */
inline void local_refine(const OptProblem& problem, const std::vector<double>& start, OptTrace& trace) {
    problem.validate();
    const std::size_t d = problem.dim();
    if (start.size() != d) {
        throw std::invalid_argument("start point has the wrong dimension");
    }
    if (trace.names.empty()) {
        for (const auto& b : problem.bounds) {
            trace.names.push_back(b.name);
        }
    }
    int used = 0;
    auto eval = [&](const std::vector<double>& x) {
        const double v = problem.objective(x);
        trace.record(x, v);
        ++used;
        return v;
    };
    std::vector<std::vector<double>> simplex;
    std::vector<double> f;
    simplex.push_back(clamp_to_box(start, problem.bounds));
    f.push_back(eval(simplex[0]));
    for (std::size_t i = 0; i < d && used < problem.refine_budget; ++i) {
        auto x = simplex[0];
        const auto& b = problem.bounds[i];
        const double step = 0.05 * (b.hi - b.lo);
        x[i] = x[i] + step <= b.hi ? x[i] + step : x[i] - step;
        simplex.push_back(x);
        f.push_back(eval(x));
    }
    if (simplex.size() < d + 1) {
        return;
    }
    auto size = [&]() {
        double s = 0.0;
        for (std::size_t i = 1; i <= d; ++i) {
            for (std::size_t a = 0; a < d; ++a) {
                s = std::max(s, std::abs(simplex[i][a] - simplex[0][a]));
            }
        }
        return s;
    };
    std::vector<std::size_t> order(d + 1);
    while (used < problem.refine_budget) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return f[a] > f[b]; });
        {
            std::vector<std::vector<double>> s2;
            std::vector<double> f2;
            for (auto i : order) {
                s2.push_back(simplex[i]);
                f2.push_back(f[i]);
            }
            simplex.swap(s2);
            f.swap(f2);
        }
        if (size() < problem.tolerance) {
            break;
        }
        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t a = 0; a < d; ++a) {
                centroid[a] += simplex[i][a] / static_cast<double>(d);
            }
        }
        auto along = [&](double t) {
            std::vector<double> x(d);
            for (std::size_t a = 0; a < d; ++a) {
                x[a] = centroid[a] + t * (simplex[d][a] - centroid[a]);
            }
            return clamp_to_box(std::move(x), problem.bounds);
        };
        const auto xr = along(-1.0);
        const double fr = eval(xr);
        if (fr > f[0]) {
            if (used >= problem.refine_budget) {
                simplex[d] = xr;
                f[d] = fr;
                break;
            }
            const auto xe = along(-2.0);
            const double fe = eval(xe);
            simplex[d] = fe > fr ? xe : xr;
            f[d] = std::max(fe, fr);
            continue;
        }
        if (fr > f[d - 1]) {
            simplex[d] = xr;
            f[d] = fr;
            continue;
        }
        if (used >= problem.refine_budget) {
            break;
        }
        const bool outside = fr > f[d];
        const auto xc = along(outside ? -0.5 : 0.5);
        const double fc = eval(xc);
        if (fc > std::max(fr, f[d]) || (outside && fc >= fr)) {
            simplex[d] = xc;
            f[d] = fc;
            continue;
        }
        // Shrink toward the best vertex.
        for (std::size_t i = 1; i <= d && used < problem.refine_budget; ++i) {
            for (std::size_t a = 0; a < d; ++a) {
                simplex[i][a] = simplex[0][a] + 0.5 * (simplex[i][a] - simplex[0][a]);
            }
            f[i] = eval(simplex[i]);
        }
    }
}

/// Grid search, optional extra candidate points, then refinement from the best.
inline OptTrace optimize(const OptProblem& problem, const std::vector<std::vector<double>>& extra_starts = {}) {
    OptTrace trace = grid_search(problem);
    for (const auto& x : extra_starts) {
        if (x.size() != problem.dim()) {
            throw std::invalid_argument("extra start has the wrong dimension");
        }
        trace.record(clamp_to_box(x, problem.bounds), problem.objective(clamp_to_box(x, problem.bounds)));
    }
    trace.grid_evaluations = trace.log.size();
    const auto start = trace.best_params;
    local_refine(problem, start, trace);
    return trace;
}

}  // namespace flcu
