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
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flcu/bits.hpp"

namespace flcu {

/// Coefficients below this magnitude get zero sampling probability.
inline constexpr double kPruneThreshold = 1e-14;

/// Integer-valued function of a basis index, with range {0..m}.
using IndexFunction = std::function<int(std::uint64_t)>;

/**
 * Fourier LCU of the diagonal unitary k -> e^{-i gamma f(k)}, k = 0..m, over
 * the phase family V(theta_j): k -> e^{i theta_j k}, theta_j = 2 pi j / (m+1).
 */
struct DiagonalLcu {
    int m = 0;
    double gamma = 0.0;
    std::vector<double> f_values;
    std::vector<Complex> coeffs;
    std::vector<double> thetas;
    double l1_norm = 0.0;
    double gamma_cost = 0.0;  // ||c||_1^2
    std::vector<double> branch_probs;

    int num_branches() const {
        return m + 1;
    }

    /// sum_j c_j e^{i theta_j k}.
    Complex evaluate(int k) const {
        Complex s{0.0, 0.0};
        for (int j = 0; j <= m; ++j) {
            s += coeffs[j] * std::polar(1.0, thetas[j] * k);
        }
        return s;
    }

    /// Target value e^{-i gamma f(k)}.
    Complex target(int k) const {
        return std::polar(1.0, -gamma * f_values.at(static_cast<std::size_t>(k)));
    }

    double l2_norm() const {
        double s = 0.0;
        for (const auto& c : coeffs) {
            s += std::norm(c);
        }
        return std::sqrt(s);
    }

    /// max_k |sum_j c_j e^{i theta_j k} - e^{-i gamma f(k)}|.
    double reconstruction_error() const {
        double e = 0.0;
        for (int k = 0; k <= m; ++k) {
            e = std::max(e, std::abs(evaluate(k) - target(k)));
        }
        return e;
    }
};

/// Direct O(m^2) DFT of the target phase sequence.
inline DiagonalLcu build_diagonal_lcu(const std::vector<double>& f_values, double gamma) {
    if (f_values.empty()) {
        throw std::invalid_argument("f_values must be nonempty");
    }
    if (!std::isfinite(gamma)) {
        throw std::invalid_argument("gamma must be finite");
    }
    for (double f : f_values) {
        if (!std::isfinite(f)) {
            throw std::invalid_argument("f_values must be finite");
        }
    }
    DiagonalLcu lcu;
    lcu.m = static_cast<int>(f_values.size()) - 1;
    lcu.gamma = gamma;
    lcu.f_values = f_values;
    const int d = lcu.m + 1;
    lcu.thetas.resize(d);
    lcu.coeffs.assign(d, Complex{0.0, 0.0});
    std::vector<Complex> target(d);
    for (int k = 0; k < d; ++k) {
        target[k] = std::polar(1.0, -gamma * f_values[k]);
    }
    for (int j = 0; j < d; ++j) {
        lcu.thetas[j] = kTwoPi * j / d;
        Complex s{0.0, 0.0};
        for (int k = 0; k < d; ++k) {
            // Reduce j*k mod d so the twiddle angle stays small.
            const long long jk = (static_cast<long long>(j) * k) % d;
            s += target[k] * std::polar(1.0, -kTwoPi * static_cast<double>(jk) / d);
        }
        lcu.coeffs[j] = s / static_cast<double>(d);
    }
    double l1 = 0.0, kept = 0.0;
    for (const auto& c : lcu.coeffs) {
        l1 += std::abs(c);
        if (std::abs(c) >= kPruneThreshold) {
            kept += std::abs(c);
        }
    }
    lcu.l1_norm = l1;
    lcu.gamma_cost = l1 * l1;
    lcu.branch_probs.assign(d, 0.0);
    for (int j = 0; j < d; ++j) {
        const double a = std::abs(lcu.coeffs[j]);
        if (a >= kPruneThreshold) {
            lcu.branch_probs[j] = a / kept;
        }
    }
    return lcu;
}

/// f(k) = (k - b)^2 for k = 0..n.
inline std::vector<double> hamming_penalty_values(int n, int b) {
    if (n < 0 || b < 0 || b > n) {
        throw std::invalid_argument("penalty target b must satisfy 0 <= b <= n");
    }
    std::vector<double> f(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        f[k] = static_cast<double>((k - b) * (k - b));
    }
    return f;
}

/// 0 inside [l, u], 1 outside, for k = 0..m.
inline std::vector<double> indicator_window_values(int m, int l, int u) {
    if (m < 0 || l < 0 || l > u || u > m) {
        throw std::invalid_argument("window must satisfy 0 <= l <= u <= m");
    }
    std::vector<double> f(static_cast<std::size_t>(m) + 1, 1.0);
    for (int k = l; k <= u; ++k) {
        f[k] = 0.0;
    }
    return f;
}

/// x -> theta_j g(x). Used with apply_diagonal_phase at gamma = -1 this
/// applies V(theta_j) = e^{i theta_j g(x)}.
inline std::function<double(std::uint64_t)> lcu_basis_unitary_as_phase(const DiagonalLcu& lcu, int j,
                                                                       IndexFunction g) {
    if (j < 0 || j > lcu.m) {
        throw std::out_of_range("branch index out of range");
    }
    const double theta = lcu.thetas[j];
    return [theta, g = std::move(g)](std::uint64_t x) { return theta * g(x); };
}

/// max_x |sum_j c_j e^{i theta_j g(x)} - e^{-i gamma f(g(x))}| over {0,1}^n.
inline double reconstruct_unitary_error(const DiagonalLcu& lcu, const IndexFunction& g, int n) {
    if (n < 1 || n > 12) {
        throw std::invalid_argument("reconstruct_unitary_error supports 1 <= n <= 12");
    }
    // Precompute per level; g only enters through its value.
    std::vector<double> err(static_cast<std::size_t>(lcu.m) + 1, -1.0);
    double worst = 0.0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        const int k = g(x);
        if (k < 0 || k > lcu.m) {
            throw std::out_of_range("g(x) outside 0..m");
        }
        if (err[k] < 0.0) {
            err[k] = std::abs(lcu.evaluate(k) - lcu.target(k));
        }
        worst = std::max(worst, err[k]);
    }
    return worst;
}

inline IndexFunction hamming_weight_function() {
    return [](std::uint64_t x) { return hamming_weight(x); };
}

}  // namespace flcu
