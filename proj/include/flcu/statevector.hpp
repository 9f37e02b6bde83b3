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
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "flcu/bits.hpp"
#include "flcu/random.hpp"
#include "flcu/sample_set.hpp"

namespace flcu {

/// Largest register the dense simulator accepts.
inline constexpr int kMaxStatevectorQubits = 16;

/// Default absolute tolerance for numerical comparisons.
inline constexpr double kDefaultTolerance = 1e-10;

/**
 * Pure state of n qubits stored as 2^n complex amplitudes.
 *
 * Storage is little-endian: qubit q corresponds to bit q of the amplitude
 * index, so qubit 0 is the least significant bit.
 */
class Statevector {
  public:
    Statevector() = default;

    /// |0...0> on n qubits.
    explicit Statevector(int n) : n_(check_size(n)), amps_(std::size_t{1} << n, Complex{0.0, 0.0}) {
        amps_[0] = 1.0;
    }

    Statevector(int n, std::vector<Complex> amps) : n_(check_size(n)), amps_(std::move(amps)) {
        if (amps_.size() != (std::size_t{1} << n)) {
            throw std::invalid_argument("amplitude array length must be 2^n");
        }
    }

    static Statevector basis(int n, std::uint64_t index) {
        Statevector s(n);
        if (index >= s.size()) {
            throw std::out_of_range("basis index out of range");
        }
        s.amps_[0] = 0.0;
        s.amps_[index] = 1.0;
        return s;
    }

    /// H^{\otimes n}|0...0>.
    static Statevector uniform(int n) {
        Statevector s(n);
        const double a = 1.0 / std::sqrt(static_cast<double>(s.size()));
        for (auto& z : s.amps_) {
            z = a;
        }
        return s;
    }

    int num_qubits() const {
        return n_;
    }
    std::size_t size() const {
        return amps_.size();
    }

    Complex& operator[](std::size_t i) {
        return amps_[i];
    }
    const Complex& operator[](std::size_t i) const {
        return amps_[i];
    }

    std::span<Complex> amplitudes() {
        return amps_;
    }
    std::span<const Complex> amplitudes() const {
        return amps_;
    }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& z : amps_) {
            s += std::norm(z);
        }
        return s;
    }

    Statevector& operator+=(const Statevector& other) {
        require_same_size(other);
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            amps_[i] += other.amps_[i];
        }
        return *this;
    }

    Statevector& operator*=(Complex c) {
        for (auto& z : amps_) {
            z *= c;
        }
        return *this;
    }

    void require_same_size(const Statevector& other) const {
        if (other.n_ != n_) {
            throw std::invalid_argument("statevector qubit counts differ");
        }
    }

  private:
    static int check_size(int n) {
        if (n < 1 || n > kMaxStatevectorQubits) {
            throw std::invalid_argument("statevector supports 1.." + std::to_string(kMaxStatevectorQubits) +
                                        " qubits, got " + std::to_string(n));
        }
        return n;
    }

    int n_ = 0;
    std::vector<Complex> amps_;
};

inline Statevector operator+(Statevector a, const Statevector& b) {
    a += b;
    return a;
}

inline Statevector operator*(Complex c, Statevector a) {
    a *= c;
    return a;
}

/// <a|b>.
inline Complex inner_product(const Statevector& a, const Statevector& b) {
    a.require_same_size(b);
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

/// |<a|b>|^2 for normalized inputs.
inline double fidelity(const Statevector& a, const Statevector& b) {
    return std::norm(inner_product(a, b));
}

/// Distance between two states after removing the best global phase:
/// min_phi || a - e^{i phi} b ||_2.
inline double distance_up_to_phase(const Statevector& a, const Statevector& b) {
    const Complex ov = inner_product(b, a);
    const Complex ph = std::abs(ov) > 0.0 ? ov / std::abs(ov) : Complex{1.0, 0.0};
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::norm(a[i] - ph * b[i]);
    }
    return std::sqrt(s);
}

/// Largest elementwise difference |a_i - b_i|, without phase alignment.
inline double max_abs_difference(const Statevector& a, const Statevector& b) {
    a.require_same_size(b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

/// Multiplies amplitude x by e^{-i gamma f(x)}.
inline void apply_diagonal_phase(Statevector& state, const std::function<double(std::uint64_t)>& f, double gamma) {
    if (!std::isfinite(gamma)) {
        throw std::invalid_argument("phase angle must be finite");
    }
    auto amps = state.amplitudes();
    for (std::uint64_t x = 0; x < amps.size(); ++x) {
        amps[x] *= std::polar(1.0, -gamma * f(x));
    }
}

/// Probabilities |amps[x]|^2.
inline std::vector<double> measurement_distribution(const Statevector& state) {
    std::vector<double> p(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        p[i] = std::norm(state[i]);
    }
    return p;
}

/// Distribution of the Hamming weight of a measured basis state.
inline std::vector<double> hamming_weight_distribution(std::span<const double> probs, int n) {
    std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::uint64_t x = 0; x < probs.size(); ++x) {
        w[static_cast<std::size_t>(hamming_weight(x))] += probs[x];
    }
    return w;
}

/// Multinomial draw of `shots` outcomes from an explicit distribution.
inline SampleSet sample_from_distribution(std::span<const double> probs, int n, long long shots, Rng& rng,
                                          int branch = kNoBranch) {
    if (shots < 1) {
        throw std::invalid_argument("shots must be >= 1");
    }
    std::discrete_distribution<std::uint64_t> dist(probs.begin(), probs.end());
    std::vector<long long> counts(probs.size(), 0);
    for (long long s = 0; s < shots; ++s) {
        ++counts[dist(rng)];
    }
    SampleSet out(n);
    for (std::uint64_t x = 0; x < counts.size(); ++x) {
        if (counts[x] > 0) {
            out.add(BitString::from_index(x), branch, static_cast<double>(counts[x]));
        }
    }
    return out;
}

/// Measures `shots` times in the computational basis; reproducible given seed.
inline SampleSet sample_bitstrings(const Statevector& state, long long shots, std::uint64_t seed) {
    auto rng = stream_rng(seed, 0);
    const auto probs = measurement_distribution(state);
    return sample_from_distribution(probs, state.num_qubits(), shots, rng);
}

}  // namespace flcu
