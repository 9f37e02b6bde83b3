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

#include <Eigen/Eigenvalues>
#include <cmath>

#include "flcu/su2.hpp"

using namespace flcu;

namespace {

// Spin-j generators in the m = j..-j basis, built from ladder operators.
struct SpinOps {
    Matrix jy, jz;
};

SpinOps spin_ops(int two_j) {
    const int d = two_j + 1;
    const double j = two_j / 2.0;
    Matrix jp = Matrix::Zero(d, d);
    Matrix jz = Matrix::Zero(d, d);
    for (int a = 0; a < d; ++a) {
        const double m = j - a;
        jz(a, a) = m;
        if (a > 0) {
            // J_+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>
            jp(a - 1, a) = std::sqrt(j * (j + 1) - m * (m + 1));
        }
    }
    Matrix jy = (jp - jp.adjoint()) / Complex(0, 2);
    return {jy, jz};
}

Matrix expm_hermitian(const Matrix& h, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector ph(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < ph.size(); ++i) {
        ph(i) = std::exp(Complex(0, -t * es.eigenvalues()(i)));
    }
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix random_unitary(int d, Rng& rng) {
    std::normal_distribution<double> g;
    Matrix a(d, d);
    for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) {
            a(i, k) = Complex(g(rng), g(rng));
        }
    }
    Eigen::HouseholderQR<Matrix> qr(a);
    return qr.householderQ();
}

EulerAngles random_angles(Rng& rng) {
    return haar_sample(rng);
}

}  // namespace

TEST(spin_sectors, examples) {
    auto s2 = spin_sectors(2);
    EXPECT_EQ(s2.two_js, (std::vector<int>{2, 0}));
    EXPECT_EQ(s2.mults, (std::vector<std::uint64_t>{1, 1}));
    auto s4 = spin_sectors(4);
    EXPECT_EQ(s4.two_js, (std::vector<int>{4, 2, 0}));
    EXPECT_EQ(s4.mults, (std::vector<std::uint64_t>{1, 3, 2}));
    auto s3 = spin_sectors(3);
    EXPECT_EQ(s3.two_js, (std::vector<int>{3, 1}));
    EXPECT_EQ(s3.mults, (std::vector<std::uint64_t>{1, 2}));
    EXPECT_THROW(spin_sectors(0), std::invalid_argument);
    EXPECT_THROW(spin_sectors(65), std::invalid_argument);
}

TEST(spin_sectors, dimension_identity) {
    for (int n = 1; n <= 64; ++n) {
        auto s = spin_sectors(n);
        EXPECT_TRUE(s.dimension_sum() == (static_cast<unsigned __int128>(1) << n)) << n;
        EXPECT_EQ(s.two_js.back(), n % 2);
        EXPECT_DOUBLE_EQ(s.gamma_bound(), su2_gamma_bound(n));
    }
}

TEST(wigner_small_d, closed_forms) {
    for (double t : {0.0, 0.4, 1.3, 2.9}) {
        EXPECT_NEAR(wigner_small_d(0.5, 0.5, 0.5, t), std::cos(t / 2), 1e-14);
        EXPECT_NEAR(wigner_small_d(0.5, 0.5, -0.5, t), -std::sin(t / 2), 1e-14);
        EXPECT_NEAR(wigner_small_d(1, 0, 0, t), std::cos(t), 1e-13);
    }
    for (int tj = 0; tj <= 12; ++tj) {
        for (int tm = -tj; tm <= tj; tm += 2) {
            EXPECT_NEAR(wigner_small_d_twice(tj, tm, tm, 0.0), 1.0, 1e-12);
        }
    }
    EXPECT_THROW(wigner_small_d(1, 2, 0, 0.1), std::invalid_argument);
    EXPECT_THROW(wigner_small_d(1, 0.5, 0, 0.1), std::invalid_argument);
}

TEST(wigner_small_d, matches_generator_exponential) {
    for (int tj = 1; tj <= 6; ++tj) {
        auto ops = spin_ops(tj);
        for (double t : {0.3, 1.1, 2.5}) {
            Matrix r = expm_hermitian(ops.jy, t);
            for (int a = 0; a <= tj; ++a) {
                for (int b = 0; b <= tj; ++b) {
                    EXPECT_NEAR(wigner_small_d_twice(tj, tj - 2 * a, tj - 2 * b, t), r(a, b).real(), 1e-10);
                }
            }
        }
    }
}

TEST(wigner_D_matrix, matches_generator_exponentials) {
    Rng rng(3);
    for (int tj = 1; tj <= 5; ++tj) {
        auto ops = spin_ops(tj);
        auto g = random_angles(rng);
        Matrix oracle = expm_hermitian(ops.jz, g.alpha) * expm_hermitian(ops.jy, g.theta) * expm_hermitian(ops.jz, g.chi);
        EXPECT_LT((wigner_D_matrix(tj, g) - oracle).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(wigner_D_matrix, spin_half_is_qubit_rotation) {
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        auto g = random_angles(rng);
        EXPECT_LT((wigner_D_matrix(1, g) - euler_matrix(g)).cwiseAbs().maxCoeff(), 1e-13);
    }
}

TEST(wigner_small_d, orthogonality) {
    Rng rng(7);
    for (int tj = 0; tj <= 16; ++tj) {
        const double t = kPi * uniform01(rng);
        Eigen::MatrixXd d(tj + 1, tj + 1);
        for (int a = 0; a <= tj; ++a) {
            for (int b = 0; b <= tj; ++b) {
                d(a, b) = wigner_small_d_twice(tj, tj - 2 * a, tj - 2 * b, t);
            }
        }
        EXPECT_LT((d.transpose() * d - Eigen::MatrixXd::Identity(tj + 1, tj + 1)).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(coeff_general, identity_at_origin) {
    for (int n : {1, 2, 5, 12}) {
        SpinBlocks id;
        for (int tj : spin_sectors(n).two_js) {
            id[tj] = Matrix::Identity(tj + 1, tj + 1);
        }
        EXPECT_NEAR(std::abs(coeff_general(id, n, {}) - su2_gamma_bound(n)), 0, 1e-9);
    }
}

TEST(coeff_general, single_qubit) {
    Rng rng(11);
    for (int i = 0; i < 10; ++i) {
        auto g0 = random_angles(rng), g = random_angles(rng);
        SpinBlocks b{{1, Matrix(euler_matrix(g0))}};
        const Complex direct = 2.0 * (euler_matrix(g0) * euler_matrix(g).adjoint()).trace();
        EXPECT_NEAR(std::abs(coeff_general(b, 1, g) - direct), 0, 1e-12);
    }
}

TEST(coeff_general, errors) {
    SpinBlocks b{{2, Matrix::Identity(3, 3)}};
    EXPECT_THROW(coeff_general(b, 2, {}), std::invalid_argument);
    b[0] = Matrix::Identity(1, 1) * 2.0;
    EXPECT_THROW(coeff_general(b, 2, {}), std::invalid_argument);
}

TEST(coeff_general, monte_carlo_orthogonality) {
    Rng rng(13);
    const int n = 2;
    SpinBlocks blocks{{2, random_unitary(3, rng)}, {0, random_unitary(1, rng)}};
    const std::size_t samples = 100000;
    auto gs = haar_samples(samples, 99);
    Matrix acc2 = Matrix::Zero(3, 3), acc0 = Matrix::Zero(1, 1);
    for (const auto& g : gs) {
        const Complex a = coeff_general(blocks, n, g);
        acc2 += a * wigner_D_matrix(2, g);
        acc0 += a * wigner_D_matrix(0, g);
    }
    acc2 /= static_cast<double>(samples);
    acc0 /= static_cast<double>(samples);
    EXPECT_LT((acc2 - blocks[2]).cwiseAbs().maxCoeff(), 0.05);
    EXPECT_LT((acc0 - blocks[0]).cwiseAbs().maxCoeff(), 0.05);
}

TEST(coeff_xy, identity_value) {
    EXPECT_NEAR(std::abs(coeff_xy(12, 0.0, {}) - 455.0), 0, 1e-9);
    EXPECT_NEAR(std::abs(coeff_xy(3, 0.0, {}) - 20.0), 0, 1e-12);
}

TEST(coeff_xy, two_qubit_blocks) {
    Rng rng(17);
    const double beta = 0.3;
    Matrix a1 = Matrix::Zero(3, 3);
    a1(0, 0) = std::exp(Complex(0, -4 * beta));
    a1(1, 1) = std::exp(Complex(0, -8 * beta));
    a1(2, 2) = std::exp(Complex(0, -4 * beta));
    SpinBlocks b{{2, a1}, {0, Matrix::Identity(1, 1)}};
    for (int i = 0; i < 10; ++i) {
        auto g = random_angles(rng);
        EXPECT_NEAR(std::abs(coeff_xy(2, beta, g) - coeff_general(b, 2, g)), 0, 1e-12);
    }
}

TEST(coeff_xy, two_path_consistency) {
    Rng rng(19);
    for (int i = 0; i < 100; ++i) {
        const int n = 1 + i % 6;
        const double beta = 2 * kPi * uniform01(rng) - kPi;
        auto g = random_angles(rng);
        EXPECT_NEAR(std::abs(coeff_xy(n, beta, g) - coeff_general(xy_blocks(n, beta), n, g)), 0, 1e-9);
    }
}

TEST(coeff_xy, zero_beta_is_identity) {
    Rng rng(23);
    for (int i = 0; i < 10; ++i) {
        auto g = random_angles(rng);
        SpinBlocks id;
        for (int tj : spin_sectors(5).two_js) {
            id[tj] = Matrix::Identity(tj + 1, tj + 1);
        }
        EXPECT_NEAR(std::abs(coeff_xy(5, 0.0, g) - coeff_general(id, 5, g)), 0, 1e-10);
    }
}

TEST(haar_sample, statistics) {
    const std::size_t n = 1000000;
    auto gs = haar_samples(n, 2024);
    double mean_cos = 0;
    std::size_t low_alpha = 0;
    for (const auto& g : gs) {
        mean_cos += std::cos(g.theta);
        low_alpha += g.alpha < kPi;
        ASSERT_GE(g.alpha, 0.0);
        ASSERT_LT(g.alpha, kTwoPi);
        ASSERT_GE(g.theta, 0.0);
        ASSERT_LE(g.theta, kPi);
        ASSERT_GE(g.chi, 0.0);
        ASSERT_LT(g.chi, 2 * kTwoPi);
    }
    mean_cos /= n;
    EXPECT_LE(std::abs(mean_cos), 0.005);
    EXPECT_LT(std::abs(static_cast<double>(low_alpha) - n / 2.0), 5 * std::sqrt(n * 0.25));
}

TEST(haar_sample, deterministic_and_worker_independent) {
    auto a = haar_samples(10000, 5, 0, 1);
    auto b = haar_samples(10000, 5, 0, 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        ASSERT_EQ(a[i].alpha, b[i].alpha);
        ASSERT_EQ(a[i].theta, b[i].theta);
        ASSERT_EQ(a[i].chi, b[i].chi);
    }
}

TEST(build_su2_pool, gamma_bound_at_zero_beta) {
    auto pool = build_su2_pool(4, 0.0, 20000, 100, 20000, 1);
    EXPECT_LE(pool.gamma_hat, su2_gamma_bound(4) + 3 * pool.gamma_sigma);
    EXPECT_GT(pool.gamma_hat, 1.0);
    double s = 0;
    for (double p : pool.sample_probs) {
        s += p;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
    for (const auto& b : pool.branches) {
        EXPECT_NEAR(std::abs(b.weight - std::polar(b.abs_weight, b.phase)), 0, 1e-12);
    }
    EXPECT_THROW(build_su2_pool(4, 0.0, 10, 20, 10, 1), std::invalid_argument);
}

TEST(build_su2_pool, selection_frequencies) {
    const std::size_t sel = 100000;
    auto pool = build_su2_pool(3, 0.4, 40, 10, 100, 8);
    std::vector<double> counts(40, 0);
    for (auto i : select_branches(pool.sample_probs, sel, 8)) {
        counts[i] += 1;
    }
    for (std::size_t i = 0; i < 40; ++i) {
        const double p = pool.sample_probs[i];
        EXPECT_LT(std::abs(counts[i] - sel * p), 5 * std::sqrt(sel * p * (1 - p)) + 1e-9);
    }
}

TEST(xy_unitary_dense, two_qubit_spectrum) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(xy_hamiltonian_dense(2));
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + 4);
    EXPECT_NEAR(ev[0], 0, 1e-12);
    EXPECT_NEAR(ev[1], 4, 1e-12);
    EXPECT_NEAR(ev[2], 4, 1e-12);
    EXPECT_NEAR(ev[3], 8, 1e-12);
}

TEST(xy_unitary_dense, spectrum_matches_sectors) {
    for (int n = 2; n <= 6; ++n) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(xy_hamiltonian_dense(n));
        auto expect = xy_expected_spectrum(n);
        ASSERT_EQ(expect.size(), static_cast<std::size_t>(es.eigenvalues().size()));
        for (std::size_t i = 0; i < expect.size(); ++i) {
            EXPECT_NEAR(es.eigenvalues()(static_cast<Eigen::Index>(i)), expect[i], 1e-9);
        }
    }
}

TEST(xy_unitary_dense, permutation_invariant) {
    const int n = 4;
    auto u = xy_unitary_dense(n, 0.37);
    EXPECT_LT((u.adjoint() * u - Matrix::Identity(16, 16)).cwiseAbs().maxCoeff(), 1e-10);
    for (auto [a, b] : std::vector<std::pair<int, int>>{{0, 1}, {1, 3}, {0, 2}}) {
        Matrix p = Matrix::Zero(16, 16);
        for (int x = 0; x < 16; ++x) {
            int y = x;
            const int ba = (x >> a) & 1, bb = (x >> b) & 1;
            if (ba != bb) {
                y ^= (1 << a) | (1 << b);
            }
            p(y, x) = 1;
        }
        EXPECT_LT((u * p - p * u).cwiseAbs().maxCoeff(), 1e-10);
    }
    EXPECT_THROW(xy_unitary_dense(9, 0.1), std::invalid_argument);
}

TEST(mc_reconstruct_xy, identity_two_qubits) {
    auto r = mc_reconstruct_xy(2, 0.0, 100000, 3);
    EXPECT_LE(r.frobenius_error, 0.1);
}

TEST(mc_reconstruct_xy, dense_target_two_qubits) {
    auto r = mc_reconstruct_xy(2, 0.25, 1000000, 4);
    EXPECT_LE(r.frobenius_error, 0.05);
}

TEST(mc_reconstruct_xy, worker_independent) {
    auto a = mc_reconstruct_xy(2, 0.3, 20000, 5, 1);
    auto b = mc_reconstruct_xy(2, 0.3, 20000, 5, 2);
    EXPECT_EQ(a.frobenius_error, b.frobenius_error);
}
