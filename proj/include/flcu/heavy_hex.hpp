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
#include <array>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "flcu/problems.hpp"

namespace flcu {

/**
 * Heavy-hex lattice with `rows` x `cols` cells.
 *
 * There are rows+1 horizontal chains. Chain positions are global columns:
 * the top chain spans 0..4C, middle chains 0..4C+2 and the bottom chain
 * 0..4C or 2..4C+2 depending on the parity of the last bridge row. Bridge row r
 * joins chain r to chain r+1 at columns off_r + 4i (i = 0..C), with
 * off_r = 0 for even r and 2 for odd r. Nodes are numbered chain 0, bridge
 * row 0, chain 1, bridge row 1, ... so the (5, 3) preset has 106 nodes.
 */
inline Graph heavy_hex_lattice(int rows, int cols) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("heavy-hex lattice needs rows, cols >= 1");
    }
    const int width = 4 * cols + 3;
    auto chain_span = [&](int r) -> std::pair<int, int> {
        if (r == 0) {
            return {0, 4 * cols};
        }
        if (r == rows) {
            return (rows - 1) % 2 == 0 ? std::make_pair(0, 4 * cols) : std::make_pair(2, 4 * cols + 2);
        }
        return {0, 4 * cols + 2};
    };
    // node id per (chain, column), -1 where the chain has no node.
    std::vector<std::vector<int>> chain_id(static_cast<std::size_t>(rows) + 1, std::vector<int>(width, -1));
    std::vector<std::vector<std::pair<int, int>>> bridges(static_cast<std::size_t>(rows));  // (id, column)
    int next = 0;
    for (int r = 0; r <= rows; ++r) {
        auto [lo, hi] = chain_span(r);
        for (int c = lo; c <= hi; ++c) {
            chain_id[r][c] = next++;
        }
        if (r < rows) {
            const int off = r % 2 == 0 ? 0 : 2;
            for (int i = 0; i <= cols; ++i) {
                bridges[r].emplace_back(next++, off + 4 * i);
            }
        }
    }
    Graph g(next);
    for (int r = 0; r <= rows; ++r) {
        for (int c = 0; c + 1 < width; ++c) {
            if (chain_id[r][c] >= 0 && chain_id[r][c + 1] >= 0) {
                g.add_edge(chain_id[r][c], chain_id[r][c + 1]);
            }
        }
        if (r < rows) {
            for (auto [id, col] : bridges[r]) {
                g.add_edge(chain_id[r][col], id);
                g.add_edge(id, chain_id[r + 1][col]);
            }
        }
    }
    return g;
}

/// Proper edge coloring with `num_colors` colors.
///
/// Edges are visited in (min node, max node) order and get the lowest color
/// free at both ends; when none is free an alternating-path (Kempe chain)
/// swap frees one, which always succeeds on bipartite graphs with
/// num_colors >= max degree. Colors are renumbered by first appearance in the
/// graph's edge order.
inline std::vector<int> edge_coloring(const Graph& g, int num_colors = 3) {
    const int n = g.num_nodes();
    const auto& edges = g.edges();
    std::vector<int> color(edges.size(), -1);
    // at[v][c] = edge index with color c at v, or -1.
    std::vector<std::vector<int>> at(static_cast<std::size_t>(n), std::vector<int>(num_colors, -1));
    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::make_pair(edges[a].i, edges[a].j) < std::make_pair(edges[b].i, edges[b].j);
    });
    auto free_at = [&](int v, int c) { return at[v][c] < 0; };
    auto assign = [&](std::size_t e, int c) {
        color[e] = c;
        at[edges[e].i][c] = static_cast<int>(e);
        at[edges[e].j][c] = static_cast<int>(e);
    };
    for (std::size_t e : order) {
        const int u = edges[e].i, v = edges[e].j;
        int chosen = -1;
        for (int c = 0; c < num_colors && chosen < 0; ++c) {
            if (free_at(u, c) && free_at(v, c)) {
                chosen = c;
            }
        }
        if (chosen < 0) {
            int a = -1, b = -1;
            for (int c = 0; c < num_colors; ++c) {
                if (a < 0 && free_at(u, c)) {
                    a = c;
                }
                if (b < 0 && free_at(v, c)) {
                    b = c;
                }
            }
            if (a < 0 || b < 0) {
                throw std::runtime_error("edge coloring: degree exceeds color count");
            }
            // Walk the a/b alternating path from v and swap its colors.
            std::vector<std::size_t> path;
            int x = v, want = a;
            while (at[x][want] >= 0) {
                const std::size_t pe = static_cast<std::size_t>(at[x][want]);
                path.push_back(pe);
                x = edges[pe].i == x ? edges[pe].j : edges[pe].i;
                want = want == a ? b : a;
                if (x == u) {
                    throw std::runtime_error("edge coloring: Kempe chain closed an odd cycle");
                }
            }
            for (std::size_t pe : path) {
                at[edges[pe].i][color[pe]] = -1;
                at[edges[pe].j][color[pe]] = -1;
            }
            for (std::size_t pe : path) {
                assign(pe, color[pe] == a ? b : a);
            }
            chosen = a;
        }
        assign(e, chosen);
    }
    std::vector<int> relabel(num_colors, -1);
    int seen = 0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (relabel[color[e]] < 0) {
            relabel[color[e]] = seen++;
        }
    }
    for (auto& c : color) {
        c = relabel[c];
    }
    return color;
}

/// A logical interaction that first becomes adjacent at some layer.
struct PlacedEdge {
    int phys_a = 0;
    int phys_b = 0;
    int logical_i = 0;
    int logical_j = 0;
};

struct HeavyHexSwapGraph {
    int rows = 0;
    int cols = 0;
    Graph lattice;             // physical coupling map
    std::vector<int> colors;   // per lattice edge
    Graph graph;               // logical problem graph
    // layers[0] holds the lattice edges; layers[l] for l >= 1 the edges first
    // reached after SWAP layer l.
    std::vector<std::vector<PlacedEdge>> layers;
    // swaps[l] lists the physical pairs swapped in SWAP layer l+1.
    std::vector<std::vector<std::pair<int, int>>> swaps;
    // logical_at[l][p] = logical qubit on physical p after l SWAP layers.
    std::vector<std::vector<int>> logical_at;
    std::vector<std::size_t> edge_counts;  // graph size after each layer
};

/// SWAP-extended heavy-hex problem graph. Layer l swaps along color class
/// (l - 1) mod 3 and adds every coupling's current logical pair; repeated
/// pairs are merged with unit weight.
inline HeavyHexSwapGraph heavy_hex_swap_graph(int rows, int cols, int swap_layers) {
    if (swap_layers < 0) {
        throw std::invalid_argument("swap_layers must be >= 0");
    }
    HeavyHexSwapGraph out;
    out.rows = rows;
    out.cols = cols;
    out.lattice = heavy_hex_lattice(rows, cols);
    const int n = out.lattice.num_nodes();
    out.colors = edge_coloring(out.lattice, 3);
    out.graph = Graph(n);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    out.logical_at.push_back(perm);

    auto add_layer = [&]() {
        std::vector<PlacedEdge> fresh;
        for (const auto& e : out.lattice.edges()) {
            const int li = perm[e.i], lj = perm[e.j];
            if (out.graph.add_edge(li, lj, 1.0, DuplicateEdges::Keep)) {
                fresh.push_back({e.i, e.j, li, lj});
            }
        }
        out.layers.push_back(std::move(fresh));
        out.edge_counts.push_back(out.graph.num_edges());
    };
    add_layer();
    for (int layer = 0; layer < swap_layers; ++layer) {
        const int c = layer % 3;
        std::vector<std::pair<int, int>> sw;
        for (std::size_t e = 0; e < out.lattice.num_edges(); ++e) {
            if (out.colors[e] == c) {
                const auto& ed = out.lattice.edges()[e];
                std::swap(perm[ed.i], perm[ed.j]);
                sw.emplace_back(ed.i, ed.j);
            }
        }
        out.swaps.push_back(std::move(sw));
        out.logical_at.push_back(perm);
        add_layer();
    }
    return out;
}

}  // namespace flcu
