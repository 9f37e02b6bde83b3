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
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "flcu/circuit.hpp"
#include "flcu/density_matrix.hpp"
#include "flcu/lcu_diagonal.hpp"
#include "flcu/random.hpp"
#include "flcu/sample_set.hpp"
#include "flcu/statevector.hpp"
#include "flcu/su2.hpp"

namespace flcu {

/// Exact-QPD verification paths are dense and limited to this size.
inline constexpr int kMaxChannelQubits = 6;

/// U = sum_j c_j V_j with each V_j given as a circuit fragment.
struct LcuChannel {
    int n = 0;
    std::vector<Circuit> branches;
    std::vector<Complex> coeffs;
    double gamma_cost = 0.0;
    std::vector<double> branch_probs;

    std::size_t size() const {
        return branches.size();
    }

    void validate() const {
        if (branches.empty() || branches.size() != coeffs.size() || branches.size() != branch_probs.size()) {
            throw std::invalid_argument("channel branches, coefficients and probabilities must align");
        }
        for (const auto& b : branches) {
            if (b.num_qubits() != n) {
                throw std::invalid_argument("channel branch acts on the wrong register");
            }
        }
    }
};

/// Fills gamma_cost and branch_probs from coeffs, pruning tiny coefficients.
inline void finalize_channel(LcuChannel& ch) {
    double l1 = 0.0, kept = 0.0;
    for (const auto& c : ch.coeffs) {
        l1 += std::abs(c);
        kept += std::abs(c) >= kPruneThreshold ? std::abs(c) : 0.0;
    }
    if (kept <= 0.0) {
        throw std::invalid_argument("channel has no nonzero coefficients");
    }
    ch.gamma_cost = l1 * l1;
    ch.branch_probs.assign(ch.coeffs.size(), 0.0);
    for (std::size_t j = 0; j < ch.coeffs.size(); ++j) {
        const double a = std::abs(ch.coeffs[j]);
        ch.branch_probs[j] = a >= kPruneThreshold ? a / kept : 0.0;
    }
    ch.validate();
}

/// Branches V_j = e^{i theta_j g(x)} as diagonal-phase fragments.
inline LcuChannel channel_from_diagonal(const DiagonalLcu& lcu, int n, const IndexFunction& g) {
    LcuChannel ch;
    ch.n = n;
    for (int j = 0; j <= lcu.m; ++j) {
        Circuit c(n);
        c.add(gates::diagonal(lcu_basis_unitary_as_phase(lcu, j, g), Angle(-1.0)));
        ch.branches.push_back(std::move(c));
        ch.coeffs.push_back(lcu.coeffs[j]);
    }
    finalize_channel(ch);
    return ch;
}

/// Layer of R_Z(theta) on every qubit.
inline Circuit rz_layer(int n, Angle theta) {
    Circuit c(n);
    for (int q = 0; q < n; ++q) {
        c.add(gates::rz(q, theta));
    }
    return c;
}

/// Branches as R_Z(theta_j) layers on Hamming-weight LCUs. Each layer equals
/// e^{-i theta_j n/2} e^{i theta_j wt(x)}, so the coefficients absorb the
/// compensating phase e^{i theta_j n/2}; |c_j| and Gamma are unchanged.
inline LcuChannel channel_from_rz_layers(const DiagonalLcu& lcu, int n) {
    if (lcu.m != n) {
        throw std::invalid_argument("R_Z layer branches need an LCU over Hamming weights 0..n");
    }
    LcuChannel ch;
    ch.n = n;
    for (int j = 0; j <= lcu.m; ++j) {
        ch.branches.push_back(rz_layer(n, lcu.thetas[j]));
        ch.coeffs.push_back(lcu.coeffs[j] * std::polar(1.0, lcu.thetas[j] * n / 2.0));
    }
    finalize_channel(ch);
    return ch;
}

/// Per-qubit R_Z(alpha) R_Y(theta) R_Z(chi); gates listed in application order.
inline Circuit euler_layer(int n, const EulerAngles& g) {
    Circuit c(n);
    for (int q = 0; q < n; ++q) {
        c.add(gates::rz(q, g.chi));
        c.add(gates::ry(q, g.theta));
        c.add(gates::rz(q, g.alpha));
    }
    return c;
}

/// Finite surrogate from the selected pool branches:
/// U_hat = sum_i (pool_alpha / N_sel) e^{i psi_i} R(g_i)^{tensor n}.
inline LcuChannel channel_from_su2_pool(const Su2Pool& pool) {
    if (pool.selected.empty()) {
        throw std::invalid_argument("pool has no selected branches");
    }
    LcuChannel ch;
    ch.n = pool.n;
    const double w = pool.pool_alpha / static_cast<double>(pool.selected.size());
    for (std::size_t idx : pool.selected) {
        const auto& b = pool.branches.at(idx);
        ch.branches.push_back(euler_layer(pool.n, b.g));
        ch.coeffs.push_back(std::polar(w, b.phase));
    }
    finalize_channel(ch);
    return ch;
}

/// K_+/- = (e^{i phi/2} V_j +/- e^{-i phi/2} V_k) / 2.
struct KrausPair {
    std::size_t j = 0;
    std::size_t k = 0;
    double phi = 0.0;
    Matrix k_plus;
    Matrix k_minus;
};

inline KrausPair make_kraus_pair(const Matrix& vj, const Matrix& vk, double phi, std::size_t j = 0, std::size_t k = 0) {
    if (vj.rows() != vk.rows() || vj.cols() != vk.cols()) {
        throw std::invalid_argument("Kraus pair unitaries differ in dimension");
    }
    KrausPair p;
    p.j = j;
    p.k = k;
    p.phi = phi;
    const Complex a = std::polar(1.0, phi / 2), b = std::polar(1.0, -phi / 2);
    p.k_plus = 0.5 * (a * vj + b * vk);
    p.k_minus = 0.5 * (a * vj - b * vk);
    return p;
}

/// Phi_+(rho) - Phi_-(rho).
inline DensityMatrix cross_term_channel(const DensityMatrix& rho, const KrausPair& pair) {
    const Eigen::Index d = rho.matrix().rows();
    if (pair.k_plus.rows() != d) {
        throw std::invalid_argument("Kraus pair and state dimensions differ");
    }
    const Matrix& r = rho.matrix();
    return DensityMatrix(rho.num_qubits(),
                         pair.k_plus * r * pair.k_plus.adjoint() - pair.k_minus * r * pair.k_minus.adjoint());
}

namespace detail {

inline void check_channel_size(const LcuChannel& ch, int rho_n) {
    ch.validate();
    if (ch.n != rho_n) {
        throw std::invalid_argument("channel and state dimensions differ");
    }
    if (ch.n > kMaxChannelQubits) {
        throw std::invalid_argument("exact channel paths support n <= 6");
    }
}

}  // namespace detail

/// sum_j |c_j|^2 V_j rho V_j^dag + sum_{k<j} 2|c_j||c_k| (Phi_+ - Phi_-)(rho).
inline DensityMatrix exact_channel_apply(const DensityMatrix& rho, const LcuChannel& ch) {
    detail::check_channel_size(ch, rho.num_qubits());
    std::vector<Matrix> vs;
    vs.reserve(ch.size());
    for (const auto& b : ch.branches) {
        vs.push_back(circuit_unitary(b));
    }
    auto out = DensityMatrix::zero(rho.num_qubits());
    for (std::size_t j = 0; j < ch.size(); ++j) {
        const double aj = std::abs(ch.coeffs[j]);
        if (aj == 0.0) {
            continue;
        }
        out.matrix() += aj * aj * vs[j] * rho.matrix() * vs[j].adjoint();
        for (std::size_t k = 0; k < j; ++k) {
            const double ak = std::abs(ch.coeffs[k]);
            if (ak == 0.0) {
                continue;
            }
            const double phi = std::arg(ch.coeffs[j]) - std::arg(ch.coeffs[k]);
            auto w = cross_term_channel(rho, make_kraus_pair(vs[j], vs[k], phi, j, k));
            out.matrix() += 2.0 * aj * ak * w.matrix();
        }
    }
    return out;
}

/// Copy of `frag` on a register of `total` qubits, every gate conditioned on
/// `control`. Diagonal phase functions only see the original qubits.
inline Circuit embed_controlled(const Circuit& frag, int total, int control, bool on_one) {
    Circuit out(total);
    const std::uint64_t mask = (std::uint64_t{1} << frag.num_qubits()) - 1;
    for (GateOp op : frag.ops()) {
        if (op.phase_fn) {
            op.phase_fn = [f = op.phase_fn, mask](std::uint64_t x) { return f(x & mask); };
        }
        op.controls.push_back({control, on_one});
        out.add(std::move(op));
    }
    return out;
}

/// Sum over ancilla outcomes a of (-1)^a rho_a for the ancilla circuit
/// H, P(phi), V_j controlled on 1, V_k controlled on 0, H, applied to a pure state.
inline DensityMatrix ancilla_cross_term(const Statevector& psi, const Circuit& vj, const Circuit& vk, double phi) {
    const int n = psi.num_qubits();
    const int anc = n;
    std::vector<Complex> amps(std::size_t{1} << (n + 1), Complex{0.0, 0.0});
    for (std::size_t x = 0; x < psi.size(); ++x) {
        amps[x] = psi[x];
    }
    Statevector s(n + 1, std::move(amps));
    Circuit c(n + 1);
    c.add(gates::h(anc));
    c.add(gates::p(anc, phi));
    c.append(embed_controlled(vj, n + 1, anc, true));
    c.append(embed_controlled(vk, n + 1, anc, false));
    c.add(gates::h(anc));
    s = run_circuit(c, s);
    Vector v0(static_cast<Eigen::Index>(psi.size())), v1(static_cast<Eigen::Index>(psi.size()));
    for (std::size_t x = 0; x < psi.size(); ++x) {
        v0(static_cast<Eigen::Index>(x)) = s[x];
        v1(static_cast<Eigen::Index>(x)) = s[x | (std::size_t{1} << anc)];
    }
    return DensityMatrix(n, v0 * v0.adjoint() - v1 * v1.adjoint());
}

/// Same expansion as exact_channel_apply with every cross term produced by the
/// explicit ancilla circuit on the eigenvectors of rho.
inline DensityMatrix ancilla_channel_apply(const DensityMatrix& rho, const LcuChannel& ch) {
    detail::check_channel_size(ch, rho.num_qubits());
    const int n = rho.num_qubits();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho.matrix() + rho.matrix().adjoint()));
    auto out = DensityMatrix::zero(n);
    for (Eigen::Index e = 0; e < es.eigenvalues().size(); ++e) {
        const double lam = es.eigenvalues()(e);
        if (std::abs(lam) < 1e-15) {
            continue;
        }
        const Statevector psi = from_eigen(n, es.eigenvectors().col(e));
        for (std::size_t j = 0; j < ch.size(); ++j) {
            const double aj = std::abs(ch.coeffs[j]);
            if (aj == 0.0) {
                continue;
            }
            const Vector vj = to_eigen(run_circuit(ch.branches[j], psi));
            out.matrix() += lam * aj * aj * vj * vj.adjoint();
            for (std::size_t k = 0; k < j; ++k) {
                const double ak = std::abs(ch.coeffs[k]);
                if (ak == 0.0) {
                    continue;
                }
                const double phi = std::arg(ch.coeffs[j]) - std::arg(ch.coeffs[k]);
                out.matrix() +=
                    lam * 2.0 * aj * ak * ancilla_cross_term(psi, ch.branches[j], ch.branches[k], phi).matrix();
            }
        }
    }
    return out;
}

/// Final state of branch j: finish(V_j(prepare |0...0>)).
inline Statevector branch_state(const LcuChannel& ch, std::size_t j, const Circuit& prepare,
                                const Circuit* finish = nullptr) {
    Statevector s = run_circuit(prepare, Statevector(ch.n));
    s = run_circuit(ch.branches.at(j), std::move(s));
    if (finish != nullptr) {
        s = run_circuit(*finish, std::move(s));
    }
    return s;
}

/// Coherent distribution p_x of finish(U prepare |0>), U = sum_j c_j V_j.
inline std::vector<double> exact_coherent_distribution(const LcuChannel& ch, const Circuit& prepare,
                                                       const Circuit* finish = nullptr) {
    ch.validate();
    Statevector prep = run_circuit(prepare, Statevector(ch.n));
    std::vector<Complex> zero(prep.size(), Complex{0.0, 0.0});
    Statevector acc(ch.n, zero);
    for (std::size_t j = 0; j < ch.size(); ++j) {
        if (ch.coeffs[j] == Complex{0.0, 0.0}) {
            continue;
        }
        acc += ch.coeffs[j] * run_circuit(ch.branches[j], prep);
    }
    if (finish != nullptr) {
        acc = run_circuit(*finish, std::move(acc));
    }
    return measurement_distribution(acc);
}

/// Ancilla-free distribution p~_x = sum_j q_j |<x| finish V_j prepare |0>|^2.
inline std::vector<double> exact_lcu_distribution(const LcuChannel& ch, const Circuit& prepare,
                                                  const Circuit* finish = nullptr) {
    ch.validate();
    Statevector prep = run_circuit(prepare, Statevector(ch.n));
    std::vector<double> out(prep.size(), 0.0);
    for (std::size_t j = 0; j < ch.size(); ++j) {
        if (ch.branch_probs[j] == 0.0) {
            continue;
        }
        Statevector s = run_circuit(ch.branches[j], prep);
        if (finish != nullptr) {
            s = run_circuit(*finish, std::move(s));
        }
        for (std::size_t x = 0; x < s.size(); ++x) {
            out[x] += ch.branch_probs[j] * std::norm(s[x]);
        }
    }
    return out;
}

/// min_x (gamma p~_x - p_x).
inline double domination_slack(std::span<const double> lcu, std::span<const double> coherent, double gamma) {
    if (lcu.size() != coherent.size()) {
        throw std::invalid_argument("distributions differ in length");
    }
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < lcu.size(); ++x) {
        m = std::min(m, gamma * lcu[x] - coherent[x]);
    }
    return m;
}

inline double domination_check(const LcuChannel& ch, const Circuit& prepare, const Circuit* finish = nullptr) {
    if (ch.n > 12) {
        throw std::invalid_argument("domination_check supports n <= 12");
    }
    const auto pt = exact_lcu_distribution(ch, prepare, finish);
    const auto p = exact_coherent_distribution(ch, prepare, finish);
    return domination_slack(pt, p, ch.gamma_cost);
}

enum class ShotAllocation {
    PerShot,        // branch redrawn for every shot
    Proportional,   // shots * q_j per branch, largest remainder rounding
};

inline const char* allocation_name(ShotAllocation a) {
    return a == ShotAllocation::PerShot ? "per-shot" : "proportional";
}

/// Largest-remainder rounding of shots * probs.
inline std::vector<long long> allocate_shots(std::span<const double> probs, long long shots) {
    std::vector<long long> counts(probs.size(), 0);
    std::vector<std::pair<double, std::size_t>> rem;
    long long used = 0;
    for (std::size_t j = 0; j < probs.size(); ++j) {
        const double exact = probs[j] * static_cast<double>(shots);
        counts[j] = static_cast<long long>(std::floor(exact));
        used += counts[j];
        rem.emplace_back(exact - std::floor(exact), j);
    }
    std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; used < shots && i < rem.size(); ++i, ++used) {
        ++counts[rem[i].second];
    }
    return counts;
}

/// Shots per random stream in the sampler.
inline constexpr long long kShotChunk = 65536;

/**
 * Randomized ancilla-free sampling: draw a branch j ~ q, run
 * finish(V_j(prepare |0>)) and measure. Records carry the branch index.
 */
inline SampleSet ancilla_free_sample(const LcuChannel& ch, const Circuit& prepare, long long shots, std::uint64_t seed,
                                     ShotAllocation mode = ShotAllocation::PerShot, const Circuit* finish = nullptr,
                                     int workers = 1) {
    ch.validate();
    if (shots < 1) {
        throw std::invalid_argument("shots must be >= 1");
    }
    const Statevector prep = run_circuit(prepare, Statevector(ch.n));
    std::vector<std::vector<double>> dists(ch.size());
    parallel_for(ch.size(), workers, [&](std::size_t j) {
        if (ch.branch_probs[j] == 0.0) {
            return;
        }
        Statevector s = run_circuit(ch.branches[j], prep);
        if (finish != nullptr) {
            s = run_circuit(*finish, std::move(s));
        }
        dists[j] = measurement_distribution(s);
    });

    SampleSet out(ch.n);
    if (mode == ShotAllocation::Proportional) {
        const auto counts = allocate_shots(ch.branch_probs, shots);
        std::vector<SampleSet> parts(ch.size());
        parallel_for(ch.size(), workers, [&](std::size_t j) {
            if (counts[j] == 0) {
                return;
            }
            auto rng = stream_rng(seed, j);
            parts[j] = sample_from_distribution(dists[j], ch.n, counts[j], rng, static_cast<int>(j));
        });
        for (const auto& p : parts) {
            out.merge(p);
        }
    } else {
        const long long chunks = (shots + kShotChunk - 1) / kShotChunk;
        std::vector<SampleSet> parts(static_cast<std::size_t>(chunks));
        parallel_for(static_cast<std::size_t>(chunks), workers, [&](std::size_t c) {
            auto rng = stream_rng(seed, c);
            const long long lo = static_cast<long long>(c) * kShotChunk;
            const long long hi = std::min(shots, lo + kShotChunk);
            std::discrete_distribution<std::size_t> pick(ch.branch_probs.begin(), ch.branch_probs.end());
            std::vector<long long> per_branch(ch.size(), 0);
            for (long long s = lo; s < hi; ++s) {
                ++per_branch[pick(rng)];
            }
            SampleSet part(ch.n);
            for (std::size_t j = 0; j < ch.size(); ++j) {
                if (per_branch[j] > 0) {
                    part.merge(sample_from_distribution(dists[j], ch.n, per_branch[j], rng, static_cast<int>(j)));
                }
            }
            parts[c] = std::move(part);
        });
        for (const auto& p : parts) {
            out.merge(p);
        }
    }
    out.metadata()["allocation"] = allocation_name(mode);
    out.metadata()["shots"] = std::to_string(shots);
    out.metadata()["seed"] = std::to_string(seed);
    return out;
}

}  // namespace flcu
