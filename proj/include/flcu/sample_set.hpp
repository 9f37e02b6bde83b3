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

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "flcu/bits.hpp"

namespace flcu {

/// Sentinel branch id for samples that did not come from an LCU branch.
inline constexpr int kNoBranch = -1;

struct SampleRecord {
    BitString bits;
    int branch = kNoBranch;
    double weight = 0.0;
};

/// Weighted bitstring outcomes with optional branch provenance.
///
/// Records are merged by (bitstring, branch) and kept in a canonical order so
/// that two sets built from the same draws compare and serialize identically.
class SampleSet {
  public:
    SampleSet() = default;
    explicit SampleSet(int num_bits) : num_bits_(num_bits) {}

    int num_bits() const {
        return num_bits_;
    }

    void add(const BitString& bits, int branch, double weight) {
        if (!(weight >= 0.0)) {
            throw std::invalid_argument("sample weight must be nonnegative");
        }
        entries_[{bits, branch}] += weight;
        total_ += weight;
    }

    void merge(const SampleSet& other) {
        for (const auto& [key, w] : other.entries_) {
            add(key.first, key.second, w);
        }
        for (const auto& [k, v] : other.metadata_) {
            metadata_.emplace(k, v);
        }
    }

    double total_weight() const {
        return total_;
    }

    std::size_t size() const {
        return entries_.size();
    }

    bool empty() const {
        return entries_.empty();
    }

    std::vector<SampleRecord> records() const {
        std::vector<SampleRecord> out;
        out.reserve(entries_.size());
        for (const auto& [key, w] : entries_) {
            out.push_back({key.first, key.second, w});
        }
        return out;
    }

    /// Weight for one (bitstring, branch) key; 0 when absent.
    double weight_of(const BitString& bits, int branch = kNoBranch) const {
        auto it = entries_.find({bits, branch});
        return it == entries_.end() ? 0.0 : it->second;
    }

    /// Total weight per bitstring, summed over branches.
    std::map<BitString, double> marginal() const {
        std::map<BitString, double> out;
        for (const auto& [key, w] : entries_) {
            out[key.first] += w;
        }
        return out;
    }

    /// Total weight per branch id.
    std::map<int, double> branch_totals() const {
        std::map<int, double> out;
        for (const auto& [key, w] : entries_) {
            out[key.second] += w;
        }
        return out;
    }

    std::map<std::string, std::string>& metadata() {
        return metadata_;
    }
    const std::map<std::string, std::string>& metadata() const {
        return metadata_;
    }

    friend bool operator==(const SampleSet& a, const SampleSet& b) {
        return a.num_bits_ == b.num_bits_ && a.entries_ == b.entries_;
    }

  private:
    int num_bits_ = 0;
    std::map<std::pair<BitString, int>, double> entries_;
    double total_ = 0.0;
    std::map<std::string, std::string> metadata_;
};

}  // namespace flcu
