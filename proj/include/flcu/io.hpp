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

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "flcu/circuit.hpp"
#include "flcu/estimators.hpp"
#include "flcu/lcu_diagonal.hpp"
#include "flcu/problems.hpp"
#include "flcu/sample_set.hpp"
#include "flcu/su2.hpp"
#include "flcu/vqopt.hpp"

namespace flcu {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest text that round-trips the double.
inline std::string format_double(double v) {
    char buf[32];
    for (int prec = 6; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) {
            break;
        }
    }
    return buf;
}

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string config_hash(const std::string& canonical) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Comment header carried by every output file.
inline void write_header(std::ostream& os, const std::string& kind, const std::string& hash) {
    os << "# flcu " << kVersion << " " << kind << "\n";
    os << "# config-hash " << hash << "\n";
}

// Instance files:
//   # flcu instance format v1
//   nodes <n>
//   k <k>
//   edge <i> <j> <w>      (one line per edge)
inline void write_instance(std::ostream& os, const Graph& g, int k) {
    os << "# flcu instance format v1\n";
    os << "nodes " << g.num_nodes() << "\n";
    os << "k " << k << "\n";
    for (const auto& e : g.edges()) {
        os << "edge " << e.i << " " << e.j << " " << format_double(e.w) << "\n";
    }
}

struct InstanceFile {
    Graph graph;
    int k = 0;
};

inline InstanceFile read_instance(std::istream& is) {
    // Output headers (other comment lines) may precede the format line.
    std::string line;
    while (std::getline(is, line) && line != "# flcu instance format v1") {
        if (line.empty() || line[0] != '#') {
            throw std::runtime_error("instance file: missing format line");
        }
    }
    if (!is) {
        throw std::runtime_error("instance file: missing format line");
    }
    int nodes = -1;
    InstanceFile out;
    bool have_k = false;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        auto fail = [&](const std::string& what) {
            throw std::runtime_error("instance file line " + std::to_string(lineno) + ": " + what);
        };
        if (key == "nodes") {
            if (!(ss >> nodes) || nodes < 1) {
                fail("bad node count");
            }
            out.graph = Graph(nodes);
        } else if (key == "k") {
            if (!(ss >> out.k)) {
                fail("bad k");
            }
            have_k = true;
        } else if (key == "edge") {
            int i = 0, j = 0;
            double w = 0.0;
            if (nodes < 0) {
                fail("edge before node count");
            }
            if (!(ss >> i >> j >> w)) {
                fail("bad edge");
            }
            out.graph.add_edge(i, j, w);
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (nodes < 0 || !have_k) {
        throw std::runtime_error("instance file: nodes and k are required");
    }
    if (out.k < 0 || out.k > nodes) {
        throw std::runtime_error("instance file: k out of range");
    }
    return out;
}

/// CSV: bitstring (qubit 0 first), branch (-1 for none), weight.
inline void write_samples_csv(std::ostream& os, const SampleSet& s) {
    for (const auto& [k, v] : s.metadata()) {
        os << "# " << k << " " << v << "\n";
    }
    os << "bitstring,branch,weight\n";
    for (const auto& r : s.records()) {
        os << r.bits.to_string(s.num_bits()) << "," << r.branch << "," << format_double(r.weight) << "\n";
    }
}

inline SampleSet read_samples_csv(std::istream& is) {
    std::string line;
    SampleSet out;
    bool header = false;
    std::map<std::string, std::string> meta;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            const auto sp = line.find(' ', 2);
            if (sp != std::string::npos) {
                meta[line.substr(2, sp - 2)] = line.substr(sp + 1);
            }
            continue;
        }
        if (!header) {
            if (line != "bitstring,branch,weight") {
                throw std::runtime_error("sample CSV: unexpected header");
            }
            header = true;
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            throw std::runtime_error("sample CSV: malformed row");
        }
        const std::string bits = line.substr(0, c1);
        if (out.num_bits() == 0) {
            out = SampleSet(static_cast<int>(bits.size()));
        }
        out.add(BitString::from_string(bits), std::stoi(line.substr(c1 + 1, c2 - c1 - 1)),
                std::stod(line.substr(c2 + 1)));
    }
    for (auto& [k, v] : meta) {
        out.metadata()[k] = v;
    }
    return out;
}

inline std::string format_angle(const Angle& a) {
    if (!a.is_parameter()) {
        return format_double(a.value);
    }
    std::string s = a.param;
    if (a.scale != 1.0) {
        s = format_double(a.scale) + "*" + s;
    }
    if (a.value != 0.0) {
        s += (a.value > 0 ? "+" : "") + format_double(a.value);
    }
    return s;
}

/// One gate per line: kind, targets, angle (if any), controls (if any).
inline void write_circuit(std::ostream& os, const Circuit& c) {
    os << "qubits " << c.num_qubits() << "\n";
    for (const auto& op : c.ops()) {
        os << gate_name(op.kind);
        for (int t : op.targets) {
            os << " " << t;
        }
        if (gate_has_angle(op.kind) || op.kind == GateKind::DiagonalPhase) {
            os << " " << format_angle(op.angle);
        }
        for (const auto& ctl : op.controls) {
            os << " ctrl" << (ctl.on_one ? "1" : "0") << "=" << ctl.qubit;
        }
        os << "\n";
    }
}

inline void write_diagonal_lcu_csv(std::ostream& os, const DiagonalLcu& lcu) {
    os << "# gamma " << format_double(lcu.gamma) << "\n";
    os << "# Gamma " << format_double(lcu.gamma_cost) << "\n";
    os << "j,theta,re,im,abs,prob\n";
    for (int j = 0; j <= lcu.m; ++j) {
        const auto c = lcu.coeffs[j];
        os << j << "," << format_double(lcu.thetas[j]) << "," << format_double(c.real()) << ","
           << format_double(c.imag()) << "," << format_double(std::abs(c)) << ","
           << format_double(lcu.branch_probs[j]) << "\n";
    }
}

/// Selected pool branches in selection order.
inline void write_pool_csv(std::ostream& os, const Su2Pool& pool) {
    os << "# n " << pool.n << "\n";
    os << "# beta " << format_double(pool.beta) << "\n";
    os << "# pool_alpha " << format_double(pool.pool_alpha) << "\n";
    os << "# Gamma_hat " << format_double(pool.gamma_hat) << "\n";
    os << "# Gamma_sigma " << format_double(pool.gamma_sigma) << "\n";
    os << "index,alpha,vartheta,chi,abs_a,phase\n";
    for (std::size_t i : pool.selected) {
        const auto& b = pool.branches.at(i);
        os << i << "," << format_double(b.g.alpha) << "," << format_double(b.g.theta) << ","
           << format_double(b.g.chi) << "," << format_double(b.abs_weight) << "," << format_double(b.phase) << "\n";
    }
}

/// Key-value record; conditional fields print "undefined" without feasible mass.
inline void write_metric_report(std::ostream& os, const MetricReport& r) {
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("undefined"); };
    os << "expectation " << format_double(r.expectation) << "\n";
    os << "Gamma " << format_double(r.gamma) << "\n";
    os << "eta " << format_double(r.eta) << "\n";
    os << "cvar_upper " << format_double(r.cvar_upper) << "\n";
    os << "cvar_lower " << format_double(r.cvar_lower) << "\n";
    os << "p_feasible " << format_double(r.p_feasible) << "\n";
    os << "p_optimal " << format_double(r.p_optimal) << "\n";
    os << "expectation_given_feasible " << opt(r.expectation_given_feasible) << "\n";
    os << "p_optimal_given_feasible " << opt(r.p_optimal_given_feasible) << "\n";
}

inline void write_trace_csv(std::ostream& os, const OptTrace& t) {
    os << "eval";
    for (const auto& n : t.names) {
        os << "," << n;
    }
    os << ",value,best_so_far\n";
    for (std::size_t i = 0; i < t.log.size(); ++i) {
        os << i;
        for (double x : t.log[i].params) {
            os << "," << format_double(x);
        }
        os << "," << format_double(t.log[i].value) << "," << format_double(t.log[i].best_so_far) << "\n";
    }
}

/// Histogram rows; `reference` (coherent distribution) adds coherent and
/// coherent/Gamma columns per bin.
inline void write_histogram_csv(std::ostream& os, const DksInstance& inst, const std::vector<double>& probs,
                                const std::vector<double>* reference = nullptr, double gamma = 1.0) {
    const auto bins = value_histogram(probs, inst);
    std::map<std::pair<double, bool>, double> ref;
    if (reference != nullptr) {
        for (const auto& b : value_histogram(*reference, inst)) {
            ref[{b.value, b.feasible}] = b.mass;
        }
    }
    std::map<std::pair<double, bool>, double> main;
    for (const auto& b : bins) {
        main[{b.value, b.feasible}] = b.mass;
    }
    for (const auto& [k, m] : ref) {
        main.try_emplace(k, 0.0);
    }
    os << "value,feasible,mass";
    if (reference != nullptr) {
        os << ",coherent,coherent_over_Gamma";
    }
    os << "\n";
    for (const auto& [k, m] : main) {
        os << format_double(k.first) << "," << (k.second ? 1 : 0) << "," << format_double(m);
        if (reference != nullptr) {
            const double c = ref.count(k) ? ref.at(k) : 0.0;
            os << "," << format_double(c) << "," << format_double(c / gamma);
        }
        os << "\n";
    }
}

}  // namespace flcu
