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

#include <array>
#include <bit>
#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flcu {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Number of set bits of a basis-state index (Hamming weight).
inline int hamming_weight(std::uint64_t x) {
    return std::popcount(x);
}

/// Exact binomial coefficient. Throws std::overflow_error if the result does
/// not fit into 64 bits.
inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) {
        return 0;
    }
    if (k > n - k) {
        k = n - k;
    }
    unsigned __int128 c = 1;
    for (int i = 0; i < k; ++i) {
        c = c * static_cast<unsigned>(n - i) / static_cast<unsigned>(i + 1);
        if (c > static_cast<unsigned __int128>(UINT64_MAX)) {
            throw std::overflow_error("binomial coefficient exceeds 64 bits");
        }
    }
    return static_cast<std::uint64_t>(c);
}

/// Fixed-width bitstring of up to 128 variables.
///
/// Bit i is variable / qubit i. Amplitude indices use the same little-endian
/// convention: qubit 0 is the least significant bit of the index. The text form
/// lists variables in index order, x_0 first.
class BitString {
  public:
    static constexpr int kMaxBits = 128;

    constexpr BitString() = default;

    static constexpr BitString from_index(std::uint64_t index) {
        BitString b;
        b.words_[0] = index;
        return b;
    }

    static BitString from_string(std::string_view text) {
        if (text.size() > kMaxBits) {
            throw std::invalid_argument("bitstring longer than 128 bits");
        }
        BitString b;
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] == '1') {
                b.set(static_cast<int>(i), true);
            } else if (text[i] != '0') {
                throw std::invalid_argument("bitstring may only contain '0' and '1'");
            }
        }
        return b;
    }

    constexpr bool get(int i) const {
        return (words_[i >> 6] >> (i & 63)) & 1U;
    }

    constexpr void set(int i, bool value) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value) {
            words_[i >> 6] |= mask;
        } else {
            words_[i >> 6] &= ~mask;
        }
    }

    int popcount() const {
        return std::popcount(words_[0]) + std::popcount(words_[1]);
    }

    /// Index form; only valid when every set bit is below 64.
    std::uint64_t index() const {
        if (words_[1] != 0) {
            throw std::out_of_range("bitstring does not fit a 64-bit index");
        }
        return words_[0];
    }

    std::string to_string(int n) const {
        std::string s(static_cast<std::size_t>(n), '0');
        for (int i = 0; i < n; ++i) {
            if (get(i)) {
                s[static_cast<std::size_t>(i)] = '1';
            }
        }
        return s;
    }

    const std::array<std::uint64_t, 2>& words() const {
        return words_;
    }

    friend constexpr bool operator==(const BitString&, const BitString&) = default;

    // Orders by the high word first so that index order is preserved.
    friend constexpr std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
        if (auto c = a.words_[1] <=> b.words_[1]; c != 0) {
            return c;
        }
        return a.words_[0] <=> b.words_[0];
    }

  private:
    std::array<std::uint64_t, 2> words_{0, 0};
};

struct BitStringHash {
    std::size_t operator()(const BitString& b) const noexcept {
        const auto& w = b.words();
        return std::hash<std::uint64_t>{}(w[0] ^ (w[1] * 0x9e3779b97f4a7c15ULL));
    }
};

}  // namespace flcu
