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

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flcu/circuit.hpp"
#include "flcu/heavy_hex.hpp"
#include "flcu/problems.hpp"
#include "flcu/qpd.hpp"
#include "flcu/statevector.hpp"
#include "flcu/su2.hpp"

namespace flcu {

// Parameter names shared by circuit builders and the optimizer.
namespace param {
inline const std::string kBeta = "beta";
inline const std::string kGamma = "gamma";
inline const std::string kTheta = "theta";
inline const std::string kAlpha = "alpha";
inline const std::string kVartheta = "vartheta";
inline const std::string kChi = "chi";
}  // namespace param

/// 2 asin(sqrt(k/n)), so that R_Y(theta)|0> has P(1) = k/n.
inline double warm_start_theta(int n, int k) {
    if (n < 1 || k < 0 || k > n) {
        throw std::invalid_argument("warm start needs 0 <= k <= n, n >= 1");
    }
    return 2.0 * std::asin(std::sqrt(static_cast<double>(k) / n));
}

/// R_Y(theta_init) on every qubit.
inline Circuit warm_start_circuit(int n, double theta_init) {
    Circuit c(n);
    for (int q = 0; q < n; ++q) {
        c.add(gates::ry(q, theta_init));
    }
    return c;
}

/// Product state with P(x_i = 1) = k/n. k = 0 or n gives a basis state.
inline Statevector warm_start_state(int n, int k) {
    return run_circuit(warm_start_circuit(n, warm_start_theta(n, k)), Statevector(n));
}

/// Binomial pmf C(n,k) p^k (1-p)^(n-k) at p = k/n, in log space.
inline double warm_start_feasible_probability(int n, int k) {
    if (n < 1 || k < 0 || k > n) {
        throw std::invalid_argument("need 0 <= k <= n, n >= 1");
    }
    if (k == 0 || k == n) {
        return 1.0;
    }
    const double p = static_cast<double>(k) / n;
    const double lc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    return std::exp(lc + k * std::log(p) + (n - k) * std::log1p(-p));
}

/// Hamming-weight distribution of a product state with P(x_i = 1) = probs[i],
/// by dynamic programming; usable far beyond statevector sizes.
inline std::vector<double> product_weight_distribution(const std::vector<double>& probs) {
    std::vector<double> w{1.0};
    for (double p : probs) {
        std::vector<double> next(w.size() + 1, 0.0);
        for (std::size_t k = 0; k < w.size(); ++k) {
            next[k] += w[k] * (1.0 - p);
            next[k + 1] += w[k] * p;
        }
        w = std::move(next);
    }
    return w;
}

/// e^{-i gamma H} for the Ising form of H, offset dropped:
/// R_Z(2 gamma h_i) and R_ZZ(2 gamma J_ij).
inline Circuit cost_layer(const IsingModel& ising, const Angle& gamma = Angle::named(param::kGamma)) {
    Circuit c(ising.n);
    auto scaled = [&](double s) {
        Angle a = gamma;
        if (a.is_parameter()) {
            a.scale *= s;
            a.value *= s;
        } else {
            a.value *= s;
        }
        return a;
    };
    for (int i = 0; i < ising.n; ++i) {
        if (ising.h[i] != 0.0) {
            c.add(gates::rz(i, scaled(2.0 * ising.h[i])));
        }
    }
    for (const auto& [key, v] : ising.j) {
        if (v != 0.0) {
            c.add(gates::rzz(key.first, key.second, scaled(2.0 * v)));
        }
    }
    return c;
}

/// Per qubit, in application order: R_Y(-theta_init), R_Z(beta), R_Y(theta_init).
inline Circuit warm_start_mixer(int n, const Angle& beta, double theta_init) {
    Circuit c(n);
    for (int q = 0; q < n; ++q) {
        c.add(gates::ry(q, -theta_init));
        c.add(gates::rz(q, beta));
        c.add(gates::ry(q, theta_init));
    }
    return c;
}

/// Second-order Trotterization of e^{-i beta (J_x^2 + J_y^2)} up to the
/// global phase e^{-2i beta n}. Each step applies the pair terms
/// exp(-i (dt/2) 2(XX+YY)) in lexicographic order and then in reverse.
inline Circuit xy_trotter(int n, const Angle& beta = Angle::named(param::kBeta), int steps = 5) {
    if (steps < 1) {
        throw std::invalid_argument("Trotter steps must be >= 1");
    }
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            pairs.emplace_back(i, j);
        }
    }
    // exp(-i t 2(XX+YY)) = RXY(4t) with t = beta / (2 steps).
    const double s = 2.0 / steps;
    Angle half = beta;
    half.scale *= s;
    half.value *= s;
    Circuit c(n);
    for (int step = 0; step < steps; ++step) {
        for (auto [i, j] : pairs) {
            c.add(gates::rxy(i, j, half));
        }
        for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) {
            c.add(gates::rxy(it->first, it->second, half));
        }
    }
    return c;
}

enum class QaoaVariant {
    CoherentPenalty,
    PenaltyLcu,
    CoherentXyTrotter,
    XyLcu,
    SingleBranchPenalty,
    SingleBranchXy,
};

inline const char* variant_name(QaoaVariant v) {
    switch (v) {
        case QaoaVariant::CoherentPenalty: return "coherent-penalty";
        case QaoaVariant::PenaltyLcu: return "penalty-lcu";
        case QaoaVariant::CoherentXyTrotter: return "coherent-xy-trotter";
        case QaoaVariant::XyLcu: return "xy-lcu";
        case QaoaVariant::SingleBranchPenalty: return "single-branch-penalty";
        case QaoaVariant::SingleBranchXy: return "single-branch-xy";
    }
    return "?";
}

inline QaoaVariant parse_variant(const std::string& s) {
    for (auto v : {QaoaVariant::CoherentPenalty, QaoaVariant::PenaltyLcu, QaoaVariant::CoherentXyTrotter,
                   QaoaVariant::XyLcu, QaoaVariant::SingleBranchPenalty, QaoaVariant::SingleBranchXy}) {
        if (s == variant_name(v)) {
            return v;
        }
    }
    throw std::invalid_argument("unknown QAOA variant '" + s + "'");
}

/// Fixed angles of one LCU branch.
struct BranchData {
    double theta = 0.0;  // penalty LCU: R_Z layer angle
    EulerAngles euler;   // XY LCU
};

struct QaoaSpec {
    const DksInstance* instance = nullptr;
    QaoaVariant variant = QaoaVariant::CoherentPenalty;
    int depth = 1;
    std::optional<double> theta_init;  // default 2 asin(sqrt(k/n))
    int trotter_steps = 5;
    // Single-branch XY only: append the warm-start mixer R(beta) after the
    // Euler layer, giving the (beta, gamma, alpha, vartheta, chi) family.
    bool xy_branch_mixer = false;
    // Single-branch XY only: drop the last R_Z(alpha) before measurement.
    bool drop_final_rz = false;

    double resolved_theta_init() const {
        return theta_init ? *theta_init : warm_start_theta(instance->n(), instance->k);
    }
};

/// Full circuit for one variant with named parameters beta/gamma/theta/
/// alpha/vartheta/chi. LCU variants take their fixed branch from `branch`.
inline Circuit build_variant_circuit(const QaoaSpec& spec, const std::optional<BranchData>& branch = std::nullopt) {
    if (spec.instance == nullptr) {
        throw std::invalid_argument("QAOA spec has no instance");
    }
    if (spec.depth != 1) {
        throw std::invalid_argument("only depth 1 is supported");
    }
    const DksInstance& inst = *spec.instance;
    const int n = inst.n();
    const double ti = spec.resolved_theta_init();
    const Angle beta = Angle::named(param::kBeta);
    const auto h1 = ising_from_qubo(objective_qubo(inst.graph));
    Circuit c = warm_start_circuit(n, ti);
    switch (spec.variant) {
        case QaoaVariant::CoherentPenalty:
            c.append(cost_layer(ising_from_qubo(inst.qubo)));
            c.append(warm_start_mixer(n, beta, ti));
            break;
        case QaoaVariant::PenaltyLcu:
        case QaoaVariant::SingleBranchPenalty: {
            Angle theta;
            if (spec.variant == QaoaVariant::PenaltyLcu) {
                if (!branch) {
                    throw std::invalid_argument("penalty-lcu needs branch data");
                }
                theta = Angle(branch->theta);
            } else {
                theta = Angle::named(param::kTheta);
            }
            c.append(cost_layer(h1));
            c.append(rz_layer(n, theta));
            c.append(warm_start_mixer(n, beta, ti));
            break;
        }
        case QaoaVariant::CoherentXyTrotter:
            c.append(cost_layer(h1));
            c.append(xy_trotter(n, beta, spec.trotter_steps));
            break;
        case QaoaVariant::XyLcu:
            if (!branch) {
                throw std::invalid_argument("xy-lcu needs branch data");
            }
            c.append(cost_layer(h1));
            c.append(euler_layer(n, branch->euler));
            break;
        case QaoaVariant::SingleBranchXy:
            c.append(cost_layer(h1));
            for (int q = 0; q < n; ++q) {
                c.add(gates::rz(q, Angle::named(param::kChi)));
                c.add(gates::ry(q, Angle::named(param::kVartheta)));
                if (!spec.drop_final_rz) {
                    c.add(gates::rz(q, Angle::named(param::kAlpha)));
                }
            }
            if (spec.xy_branch_mixer) {
                c.append(warm_start_mixer(n, beta, ti));
            }
            break;
    }
    return c;
}

/// ZYZ decomposition U = e^{i phase} R_Z(alpha) R_Y(theta) R_Z(chi).
struct EulerDecomposition {
    EulerAngles angles;
    double phase = 0.0;
};

inline EulerDecomposition euler_from_single_qubit(const Eigen::Matrix2cd& u, double tol = 1e-10) {
    if ((u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > tol) {
        throw std::invalid_argument("euler_from_single_qubit: input is not unitary");
    }
    double phase = std::arg(u.determinant()) / 2.0;
    const Eigen::Matrix2cd v = std::polar(1.0, -phase) * u;  // det v = 1
    const double a00 = std::abs(v(0, 0)), a10 = std::abs(v(1, 0));
    EulerAngles g;
    g.theta = 2.0 * std::atan2(a10, a00);
    constexpr double kDegenerate = 1e-12;
    if (a10 < kDegenerate) {
        g.theta = 0.0;
        g.alpha = 2.0 * std::arg(v(1, 1));
        g.chi = 0.0;
    } else if (a00 < kDegenerate) {
        g.theta = kPi;
        g.alpha = 2.0 * std::arg(v(1, 0));
        g.chi = 0.0;
    } else {
        g.alpha = std::arg(v(1, 1)) + std::arg(v(1, 0));
        g.chi = std::arg(v(1, 1)) - std::arg(v(1, 0));
    }
    // R_Z(alpha + 2 pi) = -R_Z(alpha): shifting alpha moves pi into the phase.
    while (g.alpha < 0.0) {
        g.alpha += kTwoPi;
        phase += kPi;
    }
    while (g.alpha >= kTwoPi) {
        g.alpha -= kTwoPi;
        phase += kPi;
    }
    g.chi = std::fmod(g.chi, 2.0 * kTwoPi);
    if (g.chi < 0.0) {
        g.chi += 2.0 * kTwoPi;
    }
    phase = std::remainder(phase, kTwoPi);
    return {g, phase};
}

/// Operator of the single-branch penalty layer R_Z(theta) followed by the
/// warm-start mixer, as one 2x2 unitary.
inline Eigen::Matrix2cd penalty_branch_unitary(double theta, double beta, double theta_init) {
    return ry_matrix(theta_init) * rz_matrix(beta) * ry_matrix(-theta_init) * rz_matrix(theta);
}

/// Cost layer of a SWAP-extended heavy-hex problem on physical qubits:
/// interactions are applied where they first become adjacent, with SWAP
/// layers in between. Returns the circuit and the final physical-to-logical map.
struct SwapNetworkCircuit {
    Circuit circuit;
    std::vector<int> logical_at;
    std::size_t swap_count = 0;
    std::size_t rzz_count = 0;
};

inline SwapNetworkCircuit swap_network_cost_layer(const HeavyHexSwapGraph& hh, const IsingModel& ising,
                                                  const Angle& gamma = Angle::named(param::kGamma)) {
    const int n = hh.lattice.num_nodes();
    if (ising.n != n) {
        throw std::invalid_argument("Ising model and lattice sizes differ");
    }
    SwapNetworkCircuit out{Circuit(n), hh.logical_at.back(), 0, 0};
    auto scaled = [&](double s) {
        Angle a = gamma;
        a.scale *= s;
        a.value *= s;
        return a;
    };
    for (int i = 0; i < n; ++i) {
        if (ising.h[i] != 0.0) {
            out.circuit.add(gates::rz(i, scaled(2.0 * ising.h[i])));
        }
    }
    for (std::size_t layer = 0; layer < hh.layers.size(); ++layer) {
        if (layer > 0) {
            for (auto [a, b] : hh.swaps[layer - 1]) {
                out.circuit.add(gates::swap(a, b));
                ++out.swap_count;
            }
        }
        for (const auto& pe : hh.layers[layer]) {
            auto it = ising.j.find({std::min(pe.logical_i, pe.logical_j), std::max(pe.logical_i, pe.logical_j)});
            if (it != ising.j.end() && it->second != 0.0) {
                out.circuit.add(gates::rzz(pe.phys_a, pe.phys_b, scaled(2.0 * it->second)));
                ++out.rzz_count;
            }
        }
    }
    return out;
}

/// Reorders amplitudes from physical to logical qubit labels.
inline Statevector relabel_to_logical(const Statevector& s, const std::vector<int>& logical_at) {
    const int n = s.num_qubits();
    if (static_cast<int>(logical_at.size()) != n) {
        throw std::invalid_argument("permutation size differs from register");
    }
    std::vector<Complex> out(s.size());
    for (std::uint64_t x = 0; x < s.size(); ++x) {
        std::uint64_t y = 0;
        for (int p = 0; p < n; ++p) {
            if ((x >> p) & 1) {
                y |= std::uint64_t{1} << logical_at[p];
            }
        }
        out[y] = s[x];
    }
    return Statevector(n, std::move(out));
}

}  // namespace flcu
