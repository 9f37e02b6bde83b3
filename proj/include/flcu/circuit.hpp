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
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "flcu/statevector.hpp"

namespace flcu {

using ParamMap = std::map<std::string, double>;

enum class GateKind {
    RZ,
    RY,
    RX,
    RZZ,
    RXY,  // exp(-i theta/2 (XX + YY)), the exact two-qubit XY block
    CZ,
    SWAP,
    H,
    P,
    DiagonalPhase,
};

inline const char* gate_name(GateKind k) {
    switch (k) {
        case GateKind::RZ: return "RZ";
        case GateKind::RY: return "RY";
        case GateKind::RX: return "RX";
        case GateKind::RZZ: return "RZZ";
        case GateKind::RXY: return "RXY";
        case GateKind::CZ: return "CZ";
        case GateKind::SWAP: return "SWAP";
        case GateKind::H: return "H";
        case GateKind::P: return "P";
        case GateKind::DiagonalPhase: return "DIAG";
    }
    return "?";
}

inline int gate_arity(GateKind k) {
    switch (k) {
        case GateKind::RZZ:
        case GateKind::RXY:
        case GateKind::CZ:
        case GateKind::SWAP:
            return 2;
        case GateKind::DiagonalPhase:
            return 0;
        default:
            return 1;
    }
}

inline bool gate_has_angle(GateKind k) {
    return k != GateKind::CZ && k != GateKind::SWAP && k != GateKind::H;
}

/// Either a literal angle or `scale * params[name] + value`.
struct Angle {
    double value = 0.0;
    std::string param;
    double scale = 1.0;

    Angle() = default;
    Angle(double v) : value(v) {}  // NOLINT(google-explicit-constructor)

    static Angle named(std::string name, double scale = 1.0, double offset = 0.0) {
        Angle a;
        a.param = std::move(name);
        a.scale = scale;
        a.value = offset;
        return a;
    }

    bool is_parameter() const {
        return !param.empty();
    }

    double resolve(const ParamMap& params) const {
        if (param.empty()) {
            return value;
        }
        auto it = params.find(param);
        if (it == params.end()) {
            throw std::invalid_argument("unbound circuit parameter '" + param + "'");
        }
        return scale * it->second + value;
    }
};

struct Control {
    int qubit = 0;
    bool on_one = true;  // false: anti-control, fires when the qubit is |0>
};

struct GateOp {
    GateKind kind = GateKind::H;
    std::vector<int> targets;
    Angle angle;
    std::vector<Control> controls;
    // DiagonalPhase only: amplitude x picks up e^{-i angle f(x)}, x the full index.
    std::function<double(std::uint64_t)> phase_fn;
};

namespace gates {

inline GateOp rz(int q, Angle a) { return {GateKind::RZ, {q}, std::move(a), {}, {}}; }
inline GateOp ry(int q, Angle a) { return {GateKind::RY, {q}, std::move(a), {}, {}}; }
inline GateOp rx(int q, Angle a) { return {GateKind::RX, {q}, std::move(a), {}, {}}; }
inline GateOp p(int q, Angle a) { return {GateKind::P, {q}, std::move(a), {}, {}}; }
inline GateOp h(int q) { return {GateKind::H, {q}, {}, {}, {}}; }
inline GateOp rzz(int a, int b, Angle t) { return {GateKind::RZZ, {a, b}, std::move(t), {}, {}}; }
inline GateOp rxy(int a, int b, Angle t) { return {GateKind::RXY, {a, b}, std::move(t), {}, {}}; }
inline GateOp cz(int a, int b) { return {GateKind::CZ, {a, b}, {}, {}, {}}; }
inline GateOp swap(int a, int b) { return {GateKind::SWAP, {a, b}, {}, {}, {}}; }
inline GateOp diagonal(std::function<double(std::uint64_t)> f, Angle gamma) {
    return {GateKind::DiagonalPhase, {}, std::move(gamma), {}, std::move(f)};
}

inline GateOp controlled(GateOp g, int control, bool on_one = true) {
    g.controls.push_back({control, on_one});
    return g;
}

}  // namespace gates

/// R_Z(theta) = diag(e^{-i theta/2}, e^{i theta/2}).
inline Eigen::Matrix2cd rz_matrix(double t) {
    Eigen::Matrix2cd m;
    m << std::polar(1.0, -t / 2), 0.0, 0.0, std::polar(1.0, t / 2);
    return m;
}

/// R_Y(theta) = exp(-i theta Y / 2).
inline Eigen::Matrix2cd ry_matrix(double t) {
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    Eigen::Matrix2cd m;
    m << c, -s, s, c;
    return m;
}

inline Eigen::Matrix2cd rx_matrix(double t) {
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    Eigen::Matrix2cd m;
    m << c, Complex(0, -s), Complex(0, -s), c;
    return m;
}

/// Ordered gate list on a fixed register. Angles may reference named
/// parameters that are bound when the circuit is run.
class Circuit {
  public:
    Circuit() = default;
    explicit Circuit(int n) : n_(n) {
        if (n < 1) {
            throw std::invalid_argument("circuit needs at least one qubit");
        }
    }

    int num_qubits() const {
        return n_;
    }
    const std::vector<GateOp>& ops() const {
        return ops_;
    }
    bool empty() const {
        return ops_.empty();
    }
    std::size_t size() const {
        return ops_.size();
    }

    Circuit& add(GateOp op) {
        validate(op);
        ops_.push_back(std::move(op));
        return *this;
    }

    /// Appends another fragment on the same register.
    Circuit& append(const Circuit& other) {
        if (other.n_ != n_) {
            throw std::invalid_argument("cannot append a circuit with a different qubit count");
        }
        ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end());
        return *this;
    }

    /// Copy with every named angle replaced by its resolved value.
    Circuit bind(const ParamMap& params) const {
        Circuit out(n_);
        out.ops_ = ops_;
        for (auto& op : out.ops_) {
            if (op.angle.is_parameter()) {
                op.angle = Angle(op.angle.resolve(params));
            }
        }
        return out;
    }

    std::set<std::string> parameters() const {
        std::set<std::string> out;
        for (const auto& op : ops_) {
            if (op.angle.is_parameter()) {
                out.insert(op.angle.param);
            }
        }
        return out;
    }

    std::size_t count(GateKind k) const {
        std::size_t c = 0;
        for (const auto& op : ops_) {
            c += op.kind == k ? 1 : 0;
        }
        return c;
    }

  private:
    void validate(const GateOp& op) const {
        const int arity = gate_arity(op.kind);
        if (arity != 0 && static_cast<int>(op.targets.size()) != arity) {
            throw std::invalid_argument(std::string("wrong number of targets for ") + gate_name(op.kind));
        }
        if (op.kind == GateKind::DiagonalPhase && !op.phase_fn) {
            throw std::invalid_argument("diagonal phase gate needs a phase function");
        }
        std::set<int> seen;
        auto check = [&](int q) {
            if (q < 0 || q >= n_) {
                throw std::out_of_range("gate target " + std::to_string(q) + " outside register of " +
                                        std::to_string(n_));
            }
            if (!seen.insert(q).second) {
                throw std::invalid_argument("gate qubits must be distinct");
            }
        };
        for (int q : op.targets) {
            check(q);
        }
        for (const auto& c : op.controls) {
            check(c.qubit);
        }
        if (!op.angle.is_parameter() && !std::isfinite(op.angle.value)) {
            throw std::invalid_argument("gate angle must be finite");
        }
    }

    int n_ = 0;
    std::vector<GateOp> ops_;
};

namespace detail {

struct ControlMask {
    std::uint64_t mask = 0;
    std::uint64_t value = 0;
    bool fires(std::uint64_t i) const {
        return (i & mask) == value;
    }
};

inline ControlMask control_mask(const std::vector<Control>& controls) {
    ControlMask m;
    for (const auto& c : controls) {
        const std::uint64_t bit = std::uint64_t{1} << c.qubit;
        m.mask |= bit;
        if (c.on_one) {
            m.value |= bit;
        }
    }
    return m;
}

inline void apply_1q(std::span<Complex> amps, int q, const Complex (&u)[4], ControlMask cm) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if ((i & bit) || !cm.fires(i)) {
            continue;
        }
        const Complex a0 = amps[i];
        const Complex a1 = amps[i | bit];
        amps[i] = u[0] * a0 + u[1] * a1;
        amps[i | bit] = u[2] * a0 + u[3] * a1;
    }
}

}  // namespace detail

/// Applies one gate in place. Throws on invalid targets or unbound parameters.
inline void apply_gate(Statevector& state, const GateOp& op, const ParamMap& params = {}) {
    const int n = state.num_qubits();
    for (int q : op.targets) {
        if (q < 0 || q >= n) {
            throw std::out_of_range("gate target outside register");
        }
    }
    for (const auto& c : op.controls) {
        if (c.qubit < 0 || c.qubit >= n) {
            throw std::out_of_range("control qubit outside register");
        }
    }
    const double t = gate_has_angle(op.kind) ? op.angle.resolve(params) : 0.0;
    if (!std::isfinite(t)) {
        throw std::invalid_argument("gate angle must be finite");
    }
    const auto cm = detail::control_mask(op.controls);
    auto amps = state.amplitudes();
    const double c = std::cos(t / 2), s = std::sin(t / 2);

    switch (op.kind) {
        case GateKind::RZ: {
            const Complex u[4] = {std::polar(1.0, -t / 2), 0.0, 0.0, std::polar(1.0, t / 2)};
            detail::apply_1q(amps, op.targets[0], u, cm);
            break;
        }
        case GateKind::RY: {
            const Complex u[4] = {c, -s, s, c};
            detail::apply_1q(amps, op.targets[0], u, cm);
            break;
        }
        case GateKind::RX: {
            const Complex u[4] = {c, Complex(0, -s), Complex(0, -s), c};
            detail::apply_1q(amps, op.targets[0], u, cm);
            break;
        }
        case GateKind::H: {
            const double r = 1.0 / std::sqrt(2.0);
            const Complex u[4] = {r, r, r, -r};
            detail::apply_1q(amps, op.targets[0], u, cm);
            break;
        }
        case GateKind::P: {
            const Complex u[4] = {1.0, 0.0, 0.0, std::polar(1.0, t)};
            detail::apply_1q(amps, op.targets[0], u, cm);
            break;
        }
        case GateKind::RZZ: {
            const std::uint64_t ba = std::uint64_t{1} << op.targets[0];
            const std::uint64_t bb = std::uint64_t{1} << op.targets[1];
            const Complex same = std::polar(1.0, -t / 2), diff = std::polar(1.0, t / 2);
            for (std::uint64_t i = 0; i < amps.size(); ++i) {
                if (cm.fires(i)) {
                    amps[i] *= (((i & ba) != 0) == ((i & bb) != 0)) ? same : diff;
                }
            }
            break;
        }
        case GateKind::CZ: {
            const std::uint64_t both = (std::uint64_t{1} << op.targets[0]) | (std::uint64_t{1} << op.targets[1]);
            for (std::uint64_t i = 0; i < amps.size(); ++i) {
                if ((i & both) == both && cm.fires(i)) {
                    amps[i] = -amps[i];
                }
            }
            break;
        }
        case GateKind::SWAP:
        case GateKind::RXY: {
            // Both act only inside span{|01>, |10>} of the target pair.
            const std::uint64_t ba = std::uint64_t{1} << op.targets[0];
            const std::uint64_t bb = std::uint64_t{1} << op.targets[1];
            const double ct = std::cos(t), st = std::sin(t);
            for (std::uint64_t i = 0; i < amps.size(); ++i) {
                if ((i & ba) == 0 || (i & bb) != 0 || !cm.fires(i)) {
                    continue;
                }
                const std::uint64_t j = (i ^ ba) | bb;
                const Complex a = amps[i], b = amps[j];
                if (op.kind == GateKind::SWAP) {
                    amps[i] = b;
                    amps[j] = a;
                } else {
                    amps[i] = ct * a + Complex(0, -st) * b;
                    amps[j] = Complex(0, -st) * a + ct * b;
                }
            }
            break;
        }
        case GateKind::DiagonalPhase: {
            for (std::uint64_t i = 0; i < amps.size(); ++i) {
                if (cm.fires(i)) {
                    amps[i] *= std::polar(1.0, -t * op.phase_fn(i));
                }
            }
            break;
        }
    }
}

/// Applies the circuit's gates in order to a copy of `initial`.
inline Statevector run_circuit(const Circuit& circuit, Statevector initial, const ParamMap& params = {}) {
    if (circuit.num_qubits() != initial.num_qubits()) {
        throw std::invalid_argument("circuit and state qubit counts differ");
    }
    for (const auto& op : circuit.ops()) {
        apply_gate(initial, op, params);
    }
    return initial;
}

}  // namespace flcu
