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
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "flcu/bits.hpp"
#include "flcu/random.hpp"

namespace flcu {

struct Edge {
    int i = 0;
    int j = 0;
    double w = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

enum class DuplicateEdges {
    Sum,   // weights of repeated pairs are added
    Keep,  // first weight wins
};

/// Simple undirected weighted graph; edges are stored with i < j in
/// insertion order.
class Graph {
  public:
    Graph() = default;
    explicit Graph(int n_nodes) : n_(n_nodes) {
        if (n_nodes < 0) {
            throw std::invalid_argument("node count must be nonnegative");
        }
    }

    int num_nodes() const {
        return n_;
    }
    const std::vector<Edge>& edges() const {
        return edges_;
    }
    std::size_t num_edges() const {
        return edges_.size();
    }

    /// Returns true if a new edge was created.
    bool add_edge(int a, int b, double w = 1.0, DuplicateEdges policy = DuplicateEdges::Sum) {
        if (a == b) {
            throw std::invalid_argument("self-loops are not allowed");
        }
        if (a < 0 || b < 0 || a >= n_ || b >= n_) {
            throw std::out_of_range("edge endpoint outside graph");
        }
        if (a > b) {
            std::swap(a, b);
        }
        auto [it, fresh] = index_.try_emplace({a, b}, edges_.size());
        if (fresh) {
            edges_.push_back({a, b, w});
        } else if (policy == DuplicateEdges::Sum) {
            edges_[it->second].w += w;
        }
        return fresh;
    }

    bool has_edge(int a, int b) const {
        return index_.count({std::min(a, b), std::max(a, b)}) > 0;
    }

    /// sum_j |w_ij|.
    double weighted_degree(int v) const {
        double d = 0.0;
        for (const auto& e : edges_) {
            if (e.i == v || e.j == v) {
                d += std::abs(e.w);
            }
        }
        return d;
    }

    std::vector<int> degrees() const {
        std::vector<int> d(static_cast<std::size_t>(n_), 0);
        for (const auto& e : edges_) {
            ++d[e.i];
            ++d[e.j];
        }
        return d;
    }

    std::vector<std::vector<int>> adjacency() const {
        std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_));
        for (const auto& e : edges_) {
            adj[e.i].push_back(e.j);
            adj[e.j].push_back(e.i);
        }
        for (auto& a : adj) {
            std::sort(a.begin(), a.end());
        }
        return adj;
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

  private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::map<std::pair<int, int>, std::size_t> index_;
};

/// Simple d-regular graph from the pairing model with rejection.
inline Graph random_regular_graph(int n, int d, std::uint64_t seed, int max_attempts = 10000) {
    if (n < 1 || d < 0 || d >= n || (n * d) % 2 != 0) {
        throw std::invalid_argument("no simple d-regular graph on n nodes");
    }
    auto rng = stream_rng(seed, 0);
    std::vector<int> stubs;
    for (int v = 0; v < n; ++v) {
        for (int k = 0; k < d; ++k) {
            stubs.push_back(v);
        }
    }
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::shuffle(stubs.begin(), stubs.end(), rng);
        std::vector<std::pair<int, int>> pairs;
        bool ok = true;
        for (std::size_t s = 0; s < stubs.size() && ok; s += 2) {
            const int a = std::min(stubs[s], stubs[s + 1]);
            const int b = std::max(stubs[s], stubs[s + 1]);
            ok = a != b && std::find(pairs.begin(), pairs.end(), std::make_pair(a, b)) == pairs.end();
            pairs.emplace_back(a, b);
        }
        if (!ok) {
            continue;
        }
        std::sort(pairs.begin(), pairs.end());
        Graph g(n);
        for (auto [a, b] : pairs) {
            g.add_edge(a, b);
        }
        return g;
    }
    throw std::runtime_error("random_regular_graph: rejection budget exceeded");
}

/// G(n, p): each unordered pair independently with probability p.
inline Graph erdos_renyi_graph(int n, double p, std::uint64_t seed) {
    if (n < 0 || !(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("erdos_renyi_graph needs n >= 0 and p in [0, 1]");
    }
    auto rng = stream_rng(seed, 0);
    Graph g(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (uniform01(rng) < p) {
                g.add_edge(i, j);
            }
        }
    }
    return g;
}

/// Unweighted complement graph.
inline Graph complement_graph(const Graph& g) {
    Graph out(g.num_nodes());
    for (int i = 0; i < g.num_nodes(); ++i) {
        for (int j = i + 1; j < g.num_nodes(); ++j) {
            if (!g.has_edge(i, j)) {
                out.add_edge(i, j);
            }
        }
    }
    return out;
}

/// Maximization QUBO: constant + sum_i linear_i x_i + sum_{i<j} Q_ij x_i x_j.
struct QuboModel {
    int n = 0;
    std::vector<double> linear;
    std::map<std::pair<int, int>, double> quadratic;
    double constant = 0.0;

    explicit QuboModel(int num_vars = 0) : n(num_vars), linear(static_cast<std::size_t>(num_vars), 0.0) {}

    void add_quadratic(int i, int j, double v) {
        if (i == j) {
            linear.at(static_cast<std::size_t>(i)) += v;  // x_i^2 = x_i
            return;
        }
        if (i > j) {
            std::swap(i, j);
        }
        if (i < 0 || j >= n) {
            throw std::out_of_range("qubo index out of range");
        }
        quadratic[{i, j}] += v;
    }

    double evaluate(const BitString& x) const {
        double v = constant;
        for (int i = 0; i < n; ++i) {
            if (x.get(i)) {
                v += linear[i];
            }
        }
        for (const auto& [key, q] : quadratic) {
            if (x.get(key.first) && x.get(key.second)) {
                v += q;
            }
        }
        return v;
    }

    double evaluate(std::uint64_t x) const {
        return evaluate(BitString::from_index(x));
    }

    /// Symmetric dense coupling matrix (zero diagonal).
    std::vector<std::vector<double>> dense_quadratic() const {
        std::vector<std::vector<double>> q(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
        for (const auto& [key, v] : quadratic) {
            q[key.first][key.second] += v;
            q[key.second][key.first] += v;
        }
        return q;
    }
};

/// Densest-k-subgraph instance with penalty QUBO
/// H(x) = sum_{ij in E} w_ij x_i x_j - lambda (wt(x) - k)^2.
struct DksInstance {
    Graph graph;
    int k = 0;
    double lambda = 0.0;
    QuboModel qubo;

    int n() const {
        return graph.num_nodes();
    }

    double objective(const BitString& x) const {
        double v = 0.0;
        for (const auto& e : graph.edges()) {
            if (x.get(e.i) && x.get(e.j)) {
                v += e.w;
            }
        }
        return v;
    }

    double penalty_objective(const BitString& x) const {
        const double d = x.popcount() - k;
        return objective(x) - lambda * d * d;
    }

    bool is_feasible(const BitString& x) const {
        return x.popcount() == k;
    }
};

/// lambda = 1 + max_i sum_j |w_ij|.
inline double dks_penalty_factor(const Graph& g) {
    double m = 0.0;
    for (int v = 0; v < g.num_nodes(); ++v) {
        m = std::max(m, g.weighted_degree(v));
    }
    return 1.0 + m;
}

inline DksInstance build_dks(const Graph& g, int k) {
    const int n = g.num_nodes();
    if (k < 0 || k > n) {
        throw std::invalid_argument("k must satisfy 0 <= k <= n");
    }
    DksInstance inst;
    inst.graph = g;
    inst.k = k;
    inst.lambda = dks_penalty_factor(g);
    const double lam = inst.lambda;
    // -lambda (sum x - k)^2 = -lambda (1 - 2k) sum x_i - 2 lambda sum_{i<j} x_i x_j - lambda k^2
    QuboModel q(n);
    q.constant = -lam * k * k;
    for (int i = 0; i < n; ++i) {
        q.linear[i] = -lam * (1.0 - 2.0 * k);
        for (int j = i + 1; j < n; ++j) {
            q.quadratic[{i, j}] = -2.0 * lam;
        }
    }
    for (const auto& e : g.edges()) {
        q.quadratic[{e.i, e.j}] += e.w;
    }
    inst.qubo = std::move(q);
    return inst;
}

enum class SolveMode {
    Exhaustive,
    FeasibleOnly,  // weight-k strings only
};

struct SolveResult {
    double best_value = 0.0;
    std::vector<BitString> best;
    std::uint64_t evaluated = 0;
};

inline constexpr int kMaxExhaustiveVars = 24;
inline constexpr double kMaxFeasibleEnumeration = 1e8;

namespace detail {

inline void record_candidate(SolveResult& r, double v, const BitString& x, bool& first) {
    const double tol = 1e-9 * std::max(1.0, std::abs(r.best_value));
    if (first || v > r.best_value + tol) {
        r.best_value = v;
        r.best.assign(1, x);
        first = false;
    } else if (std::abs(v - r.best_value) <= tol) {
        r.best.push_back(x);
    }
}

}  // namespace detail

/// Exact maximum of a QUBO by enumeration. Exhaustive mode walks a Gray code
/// with O(n) updates; feasible-only mode enumerates weight-k strings.
inline SolveResult solve_exact(const QuboModel& q, SolveMode mode = SolveMode::Exhaustive, int k = 0) {
    const int n = q.n;
    const auto dense = q.dense_quadratic();
    SolveResult r;
    bool first = true;
    if (mode == SolveMode::Exhaustive) {
        if (n > kMaxExhaustiveVars) {
            throw std::invalid_argument("exhaustive solve supports n <= 24");
        }
        std::uint64_t x = 0;
        double v = q.constant;
        detail::record_candidate(r, v, BitString::from_index(0), first);
        const std::uint64_t total = std::uint64_t{1} << n;
        for (std::uint64_t step = 1; step < total; ++step) {
            const int bit = std::countr_zero(step);
            double delta = q.linear[bit];
            for (int j = 0; j < n; ++j) {
                if ((x >> j) & 1) {
                    delta += dense[bit][j];
                }
            }
            if ((x >> bit) & 1) {
                v -= delta;
            } else {
                v += delta;
            }
            x ^= std::uint64_t{1} << bit;
            detail::record_candidate(r, v, BitString::from_index(x), first);
        }
        r.evaluated = total;
    } else {
        if (k < 0 || k > n || n > 63) {
            throw std::invalid_argument("feasible-only solve needs 0 <= k <= n <= 63");
        }
        double count = 1.0;
        for (int i = 0; i < k; ++i) {
            count = count * (n - i) / (i + 1);
        }
        if (count > kMaxFeasibleEnumeration) {
            throw std::invalid_argument("too many weight-k strings to enumerate");
        }
        std::vector<int> idx(static_cast<std::size_t>(k));
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            double v = q.constant;
            BitString x;
            for (std::size_t a = 0; a < idx.size(); ++a) {
                x.set(idx[a], true);
                v += q.linear[idx[a]];
                for (std::size_t b = a + 1; b < idx.size(); ++b) {
                    v += dense[idx[a]][idx[b]];
                }
            }
            detail::record_candidate(r, v, x, first);
            ++r.evaluated;
            // Next combination in lexicographic order.
            int pos = k - 1;
            while (pos >= 0 && idx[pos] == n - k + pos) {
                --pos;
            }
            if (pos < 0) {
                break;
            }
            ++idx[pos];
            for (int a = pos + 1; a < k; ++a) {
                idx[a] = idx[a - 1] + 1;
            }
        }
    }
    std::sort(r.best.begin(), r.best.end());
    return r;
}

/// Ising form in z_i = 1 - 2 x_i: offset + sum_i h_i z_i + sum_{i<j} J_ij z_i z_j.
struct IsingModel {
    int n = 0;
    std::vector<double> h;
    std::map<std::pair<int, int>, double> j;
    double offset = 0.0;

    double evaluate(const BitString& x) const {
        double v = offset;
        for (int i = 0; i < n; ++i) {
            v += h[i] * (x.get(i) ? -1.0 : 1.0);
        }
        for (const auto& [key, c] : j) {
            v += c * ((x.get(key.first) == x.get(key.second)) ? 1.0 : -1.0);
        }
        return v;
    }

    double evaluate(std::uint64_t x) const {
        return evaluate(BitString::from_index(x));
    }
};

/// Substitutes x_i = (1 - z_i) / 2.
inline IsingModel ising_from_qubo(const QuboModel& q) {
    IsingModel m;
    m.n = q.n;
    m.h.assign(static_cast<std::size_t>(q.n), 0.0);
    m.offset = q.constant;
    for (int i = 0; i < q.n; ++i) {
        m.offset += q.linear[i] / 2.0;
        m.h[i] -= q.linear[i] / 2.0;
    }
    for (const auto& [key, c] : q.quadratic) {
        m.offset += c / 4.0;
        m.h[key.first] -= c / 4.0;
        m.h[key.second] -= c / 4.0;
        m.j[key] += c / 4.0;
    }
    return m;
}

/// QUBO of the graph objective alone (no cardinality penalty).
inline QuboModel objective_qubo(const Graph& g) {
    QuboModel q(g.num_nodes());
    for (const auto& e : g.edges()) {
        q.quadratic[{e.i, e.j}] += e.w;
    }
    return q;
}

}  // namespace flcu
