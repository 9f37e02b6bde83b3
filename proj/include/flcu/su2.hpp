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
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "flcu/bits.hpp"
#include "flcu/circuit.hpp"
#include "flcu/density_matrix.hpp"
#include "flcu/random.hpp"

namespace flcu {

// Spin quantum numbers are passed around doubled (two_j = 2j) so that
// half-integers stay exact.

/// Total-spin sectors of n qubits.
struct SpinSectors {
    int n = 0;
    std::vector<int> two_js;  // n, n-2, ..., (n mod 2)
    std::vector<std::uint64_t> mults;

    std::size_t size() const {
        return two_js.size();
    }

    double j(std::size_t idx) const {
        return two_js[idx] / 2.0;
    }

    /// sum_j (2j+1) m_j, exact.
    unsigned __int128 dimension_sum() const {
        unsigned __int128 s = 0;
        for (std::size_t i = 0; i < two_js.size(); ++i) {
            s += static_cast<unsigned __int128>(two_js[i] + 1) * mults[i];
        }
        return s;
    }

    /// sum_j (2j+1)^2, the identity-coefficient value and the cost bound.
    double gamma_bound() const {
        double s = 0.0;
        for (int tj : two_js) {
            s += static_cast<double>(tj + 1) * (tj + 1);
        }
        return s;
    }
};

inline SpinSectors spin_sectors(int n) {
    if (n < 1 || n > 64) {
        throw std::invalid_argument("spin_sectors supports 1 <= n <= 64");
    }
    SpinSectors s;
    s.n = n;
    for (int tj = n; tj >= 0; tj -= 2) {
        const int r = (n - tj) / 2;  // n/2 - j
        s.two_js.push_back(tj);
        s.mults.push_back(binomial(n, r) - (r >= 1 ? binomial(n, r - 1) : 0));
    }
    return s;
}

/// (n+1)(n+2)(n+3)/6.
inline double su2_gamma_bound(int n) {
    return (n + 1.0) * (n + 2.0) * (n + 3.0) / 6.0;
}

namespace detail {

inline double log_factorial(int k) {
    return std::lgamma(static_cast<double>(k) + 1.0);
}

inline void check_spin(int two_j, int two_m1, int two_m2) {
    if (two_j < 0 || std::abs(two_m1) > two_j || std::abs(two_m2) > two_j || ((two_j - two_m1) & 1) ||
        ((two_j - two_m2) & 1)) {
        throw std::invalid_argument("invalid spin quantum numbers");
    }
}

inline int to_twice(double v) {
    const double t = 2.0 * v;
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-9) {
        throw std::invalid_argument("spin quantum numbers must be half-integers");
    }
    return static_cast<int>(r);
}

}  // namespace detail

/// Wigner small-d element d^j_{m1 m2}(theta) from the explicit factorial sum.
inline double wigner_small_d_twice(int two_j, int two_m1, int two_m2, double theta) {
    detail::check_spin(two_j, two_m1, two_m2);
    const int jp1 = (two_j + two_m1) / 2;  // j + m1
    const int jm1 = (two_j - two_m1) / 2;
    const int jp2 = (two_j + two_m2) / 2;
    const int jm2 = (two_j - two_m2) / 2;
    const int dm = (two_m1 - two_m2) / 2;  // m1 - m2
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const double log_pre =
        0.5 * (detail::log_factorial(jp1) + detail::log_factorial(jm1) + detail::log_factorial(jp2) +
               detail::log_factorial(jm2));
    const int s_lo = std::max(0, -dm);
    const int s_hi = std::min(jp2, jm1);
    double total = 0.0;
    for (int k = s_lo; k <= s_hi; ++k) {
        const int pc = two_j - dm - 2 * k;  // 2j + m2 - m1 - 2k
        const int ps = dm + 2 * k;
        const double log_den = detail::log_factorial(jp2 - k) + detail::log_factorial(k) +
                               detail::log_factorial(dm + k) + detail::log_factorial(jm1 - k);
        const double mag = std::exp(log_pre - log_den);
        const double sign = ((dm + k) & 1) ? -1.0 : 1.0;
        total += sign * mag * std::pow(c, pc) * std::pow(s, ps);
    }
    return total;
}

inline double wigner_small_d(double j, double m1, double m2, double theta) {
    return wigner_small_d_twice(detail::to_twice(j), detail::to_twice(m1), detail::to_twice(m2), theta);
}

/// Euler angles of R = R_Z(alpha) R_Y(theta) R_Z(chi), as an operator product.
struct EulerAngles {
    double alpha = 0.0;  // [0, 2 pi)
    double theta = 0.0;  // [0, pi]
    double chi = 0.0;    // [0, 4 pi)
};

inline Eigen::Matrix2cd euler_matrix(const EulerAngles& g) {
    return rz_matrix(g.alpha) * ry_matrix(g.theta) * rz_matrix(g.chi);
}

/// Spin-j representation matrix, rows/cols ordered m = j, j-1, ..., -j.
inline Matrix wigner_D_matrix(int two_j, const EulerAngles& g) {
    const int d = two_j + 1;
    Matrix out(d, d);
    for (int a = 0; a < d; ++a) {
        const int two_m = two_j - 2 * a;
        for (int b = 0; b < d; ++b) {
            const int two_mp = two_j - 2 * b;
            out(a, b) = std::polar(1.0, -0.5 * two_m * g.alpha - 0.5 * two_mp * g.chi) *
                        wigner_small_d_twice(two_j, two_m, two_mp, g.theta);
        }
    }
    return out;
}

/// Blocks of a permutation-invariant unitary keyed by two_j.
using SpinBlocks = std::map<int, Matrix>;

/// a_U(g) = sum_j (2j+1) Tr[U_j D^j(g)^dagger].
inline Complex coeff_general(const SpinBlocks& blocks, int n, const EulerAngles& g) {
    const auto sectors = spin_sectors(n);
    if (blocks.size() != sectors.size()) {
        throw std::invalid_argument("spin blocks must match the sectors of n exactly");
    }
    Complex total{0.0, 0.0};
    for (int tj : sectors.two_js) {
        auto it = blocks.find(tj);
        if (it == blocks.end()) {
            throw std::invalid_argument("missing spin sector 2j=" + std::to_string(tj));
        }
        const Matrix& u = it->second;
        if (u.rows() != tj + 1 || u.cols() != tj + 1) {
            throw std::invalid_argument("spin block has the wrong size");
        }
        if ((u.adjoint() * u - Matrix::Identity(tj + 1, tj + 1)).cwiseAbs().maxCoeff() > 1e-8) {
            throw std::invalid_argument("spin block is not unitary");
        }
        const Matrix dm = wigner_D_matrix(tj, g);
        total += static_cast<double>(tj + 1) * (u.array() * dm.array().conjugate()).sum();
    }
    return total;
}

/// Diagonal blocks of e^{-i beta (J_x^2 + J_y^2)}, eigenvalue 4(j(j+1) - m^2).
inline SpinBlocks xy_blocks(int n, double beta) {
    SpinBlocks out;
    for (int tj : spin_sectors(n).two_js) {
        Matrix b = Matrix::Zero(tj + 1, tj + 1);
        for (int a = 0; a <= tj; ++a) {
            const int two_m = tj - 2 * a;
            const double e = static_cast<double>(tj) * (tj + 2) - static_cast<double>(two_m) * two_m;  // 4(j(j+1)-m^2)
            b(a, a) = std::polar(1.0, -beta * e);
        }
        out[tj] = b;
    }
    return out;
}

/**
 * Closed-form XY-mixer coefficient
 * a_beta(g) = sum_j (2j+1) sum_m e^{-i4beta(j(j+1)-m^2)} e^{im(alpha+chi)} d^j_mm(theta).
 *
 * Built once per (n, beta); the diagonal d^j_mm uses
 * sum_s (-1)^s C(j+m,s) C(j-m,s) cos^{2j-2s}(theta/2) sin^{2s}(theta/2).
 */
class XyCoefficient {
  public:
    XyCoefficient(int n, double beta) : n_(n), beta_(beta) {
        if (n < 1 || n > 64) {
            throw std::invalid_argument("XyCoefficient supports 1 <= n <= 64");
        }
        for (int tj : spin_sectors(n).two_js) {
            for (int a = 0; a <= tj; ++a) {
                Term t;
                t.two_j = tj;
                t.two_m = tj - 2 * a;
                const double e = static_cast<double>(tj) * (tj + 2) - static_cast<double>(t.two_m) * t.two_m;
                t.phase = static_cast<double>(tj + 1) * std::polar(1.0, -beta * e);
                const int jp = (tj + t.two_m) / 2, jm = (tj - t.two_m) / 2;
                for (int s = 0; s <= std::min(jp, jm); ++s) {
                    const double coef = std::exp(std::lgamma(jp + 1.0) - std::lgamma(s + 1.0) - std::lgamma(jp - s + 1.0) +
                                                 std::lgamma(jm + 1.0) - std::lgamma(s + 1.0) - std::lgamma(jm - s + 1.0));
                    t.poly.push_back((s & 1) ? -coef : coef);
                }
                terms_.push_back(std::move(t));
            }
        }
    }

    int n() const {
        return n_;
    }
    double beta() const {
        return beta_;
    }

    Complex operator()(const EulerAngles& g) const {
        const double c = std::cos(g.theta / 2), s = std::sin(g.theta / 2);
        std::vector<double> cp(static_cast<std::size_t>(n_) + 1), sp(static_cast<std::size_t>(n_) + 1);
        cp[0] = sp[0] = 1.0;
        for (int i = 1; i <= n_; ++i) {
            cp[i] = cp[i - 1] * c;
            sp[i] = sp[i - 1] * s;
        }
        const double sum_angle = g.alpha + g.chi;
        Complex total{0.0, 0.0};
        for (const auto& t : terms_) {
            double d = 0.0;
            for (std::size_t s = 0; s < t.poly.size(); ++s) {
                d += t.poly[s] * cp[t.two_j - 2 * s] * sp[2 * s];
            }
            total += t.phase * std::polar(1.0, 0.5 * t.two_m * sum_angle) * d;
        }
        return total;
    }

  private:
    struct Term {
        int two_j = 0;
        int two_m = 0;
        Complex phase;
        std::vector<double> poly;
    };

    int n_;
    double beta_;
    std::vector<Term> terms_;
};

inline Complex coeff_xy(int n, double beta, const EulerAngles& g) {
    return XyCoefficient(n, beta)(g);
}

/// One Haar-random element of SU(2) in Euler angles.
inline EulerAngles haar_sample(Rng& rng) {
    EulerAngles g;
    g.alpha = kTwoPi * uniform01(rng);
    g.theta = std::acos(std::clamp(1.0 - 2.0 * uniform01(rng), -1.0, 1.0));
    g.chi = 2.0 * kTwoPi * uniform01(rng);
    return g;
}

/// Draws per random stream; draw i always comes from stream i / kHaarChunk.
inline constexpr std::size_t kHaarChunk = 4096;

/// `count` Haar draws; stream_offset separates independent batches.
inline std::vector<EulerAngles> haar_samples(std::size_t count, std::uint64_t seed, std::uint64_t stream_offset = 0,
                                             int workers = 1) {
    std::vector<EulerAngles> out(count);
    const std::size_t chunks = (count + kHaarChunk - 1) / kHaarChunk;
    parallel_for(chunks, workers, [&](std::size_t c) {
        auto rng = stream_rng(seed, stream_offset + c);
        const std::size_t hi = std::min(count, (c + 1) * kHaarChunk);
        for (std::size_t i = c * kHaarChunk; i < hi; ++i) {
            out[i] = haar_sample(rng);
        }
    });
    return out;
}

struct Su2Branch {
    EulerAngles g;
    Complex weight;
    double phase = 0.0;
    double abs_weight = 0.0;
};

struct Su2Pool {
    int n = 0;
    double beta = 0.0;
    std::vector<Su2Branch> branches;
    double pool_alpha = 0.0;   // mean |a| over the pool itself
    double alpha_hat = 0.0;    // mean |a| over the independent batch
    double gamma_hat = 0.0;    // alpha_hat^2
    double gamma_sigma = 0.0;  // delta-method standard error of gamma_hat
    std::vector<double> sample_probs;
    std::vector<std::size_t> selected;  // pool indices, drawn with replacement
};

// Stream offsets that keep pool, batch and selection draws independent.
inline constexpr std::uint64_t kPoolStreams = 0;
inline constexpr std::uint64_t kGammaStreams = std::uint64_t{1} << 32;
inline constexpr std::uint64_t kSelectStream = std::uint64_t{1} << 33;

struct GammaEstimate {
    double alpha_hat = 0.0;
    double gamma_hat = 0.0;
    double gamma_sigma = 0.0;
};

inline GammaEstimate estimate_xy_gamma(int n, double beta, std::size_t samples, std::uint64_t seed, int workers = 1,
                                       std::uint64_t stream_offset = kGammaStreams) {
    if (samples < 2) {
        throw std::invalid_argument("gamma estimate needs at least two samples");
    }
    const XyCoefficient coeff(n, beta);
    const auto gs = haar_samples(samples, seed, stream_offset, workers);
    std::vector<double> mags(samples);
    parallel_for(samples, workers, [&](std::size_t i) { mags[i] = std::abs(coeff(gs[i])); });
    double sum = 0.0, sq = 0.0;
    for (double v : mags) {
        sum += v;
        sq += v * v;
    }
    const double mean = sum / samples;
    const double var = std::max(0.0, (sq - samples * mean * mean) / (samples - 1));
    GammaEstimate est;
    est.alpha_hat = mean;
    est.gamma_hat = mean * mean;
    est.gamma_sigma = 2.0 * mean * std::sqrt(var / samples);
    return est;
}

/// `count` categorical draws with replacement from `probs`.
inline std::vector<std::size_t> select_branches(const std::vector<double>& probs, std::size_t count,
                                                std::uint64_t seed) {
    auto rng = stream_rng(seed, kSelectStream);
    std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
    std::vector<std::size_t> out(count);
    for (auto& s : out) {
        s = pick(rng);
    }
    return out;
}

inline Su2Pool build_su2_pool(int n, double beta, std::size_t pool_size, std::size_t circuits,
                              std::size_t gamma_samples, std::uint64_t seed, int workers = 1) {
    if (circuits < 1 || pool_size < circuits) {
        throw std::invalid_argument("need pool_size >= circuits >= 1");
    }
    Su2Pool pool;
    pool.n = n;
    pool.beta = beta;
    const XyCoefficient coeff(n, beta);
    const auto gs = haar_samples(pool_size, seed, kPoolStreams, workers);
    pool.branches.resize(pool_size);
    parallel_for(pool_size, workers, [&](std::size_t i) {
        Su2Branch b;
        b.g = gs[i];
        b.weight = coeff(gs[i]);
        b.abs_weight = std::abs(b.weight);
        b.phase = std::arg(b.weight);
        pool.branches[i] = b;
    });
    double total = 0.0;
    for (const auto& b : pool.branches) {
        total += b.abs_weight;
    }
    pool.pool_alpha = total / static_cast<double>(pool_size);
    pool.sample_probs.resize(pool_size);
    for (std::size_t i = 0; i < pool_size; ++i) {
        pool.sample_probs[i] = pool.branches[i].abs_weight / total;
    }
    const auto est = estimate_xy_gamma(n, beta, std::max<std::size_t>(gamma_samples, 2), seed, workers);
    pool.alpha_hat = est.alpha_hat;
    pool.gamma_hat = est.gamma_hat;
    pool.gamma_sigma = est.gamma_sigma;

    pool.selected = select_branches(pool.sample_probs, circuits, seed);
    return pool;
}

/// H_XY = J_x^2 + J_y^2 with J = sum of Paulis, i.e. 2n I + 2 sum_{i<j}(XX + YY).
inline Matrix xy_hamiltonian_dense(int n) {
    if (n < 1 || n > kMaxDensityMatrixQubits) {
        throw std::invalid_argument("xy_hamiltonian_dense supports 1 <= n <= 8");
    }
    const Eigen::Index d = Eigen::Index{1} << n;
    Matrix h = Matrix::Zero(d, d);
    for (Eigen::Index x = 0; x < d; ++x) {
        h(x, x) = 2.0 * n;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const bool bi = (x >> i) & 1, bj = (x >> j) & 1;
                if (bi != bj) {
                    // XX + YY maps |01> <-> |10> with amplitude 2.
                    const Eigen::Index y = x ^ ((Eigen::Index{1} << i) | (Eigen::Index{1} << j));
                    h(y, x) += 4.0;
                }
            }
        }
    }
    return h;
}

/// e^{-i beta H_XY} by dense diagonalization.
inline Matrix xy_unitary_dense(int n, double beta) {
    const Matrix h = xy_hamiltonian_dense(n);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const auto& vals = es.eigenvalues();
    Vector phases(vals.size());
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        phases(i) = std::polar(1.0, -beta * vals(i));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Eigenvalues 4(j(j+1) - m^2), each repeated m_j times, sorted ascending.
inline std::vector<double> xy_expected_spectrum(int n) {
    const auto s = spin_sectors(n);
    std::vector<double> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const int tj = s.two_js[i];
        for (int tm = -tj; tm <= tj; tm += 2) {
            const double e = static_cast<double>(tj) * (tj + 2) - static_cast<double>(tm) * tm;
            for (std::uint64_t r = 0; r < s.mults[i]; ++r) {
                out.push_back(e);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// R(g)^{tensor n} with qubit 0 the least significant index bit.
inline Matrix euler_tensor_power(const EulerAngles& g, int n) {
    const Eigen::Matrix2cd r = euler_matrix(g);
    const Eigen::Index d = Eigen::Index{1} << n;
    Matrix out(d, d);
    for (Eigen::Index x = 0; x < d; ++x) {
        for (Eigen::Index y = 0; y < d; ++y) {
            Complex v{1.0, 0.0};
            for (int q = 0; q < n; ++q) {
                v *= r((x >> q) & 1, (y >> q) & 1);
            }
            out(x, y) = v;
        }
    }
    return out;
}

struct McReconstruction {
    Matrix estimate;
    double frobenius_error = 0.0;
};

/// (1/N) sum_i a_beta(g_i) R(g_i)^{tensor n} over Haar draws, compared to the dense unitary.
inline McReconstruction mc_reconstruct_xy(int n, double beta, std::size_t samples, std::uint64_t seed,
                                          int workers = 1) {
    if (n < 1 || n > 6) {
        throw std::invalid_argument("mc_reconstruct_xy supports 1 <= n <= 6");
    }
    if (samples < 1) {
        throw std::invalid_argument("samples must be >= 1");
    }
    const XyCoefficient coeff(n, beta);
    const Eigen::Index d = Eigen::Index{1} << n;
    const std::size_t chunks = (samples + kHaarChunk - 1) / kHaarChunk;
    std::vector<Matrix> partial(chunks, Matrix::Zero(d, d));
    parallel_for(chunks, workers, [&](std::size_t c) {
        auto rng = stream_rng(seed, c);
        const std::size_t hi = std::min(samples, (c + 1) * kHaarChunk);
        Matrix& acc = partial[c];
        for (std::size_t i = c * kHaarChunk; i < hi; ++i) {
            const EulerAngles g = haar_sample(rng);
            acc += coeff(g) * euler_tensor_power(g, n);
        }
    });
    McReconstruction out;
    out.estimate = Matrix::Zero(d, d);
    for (const auto& p : partial) {
        out.estimate += p;
    }
    out.estimate /= static_cast<double>(samples);
    out.frobenius_error = (out.estimate - xy_unitary_dense(n, beta)).norm();
    return out;
}

}  // namespace flcu
