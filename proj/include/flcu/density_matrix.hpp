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
#include <stdexcept>
#include <string>

#include "flcu/circuit.hpp"
#include "flcu/statevector.hpp"

namespace flcu {

inline constexpr int kMaxDensityMatrixQubits = 8;

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline Vector to_eigen(const Statevector& s) {
    Vector v(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = s[i];
    }
    return v;
}

inline Statevector from_eigen(int n, const Vector& v) {
    std::vector<Complex> amps(v.data(), v.data() + v.size());
    return Statevector(n, std::move(amps));
}

/// Operator on n qubits stored densely; need not be normalized or positive
/// so that signed channel branches can be represented.
class DensityMatrix {
  public:
    DensityMatrix() = default;

    DensityMatrix(int n, Matrix mat) : n_(check_size(n)), mat_(std::move(mat)) {
        const Eigen::Index d = Eigen::Index{1} << n;
        if (mat_.rows() != d || mat_.cols() != d) {
            throw std::invalid_argument("density matrix must be 2^n x 2^n");
        }
    }

    static DensityMatrix zero(int n) {
        const Eigen::Index d = Eigen::Index{1} << check_size(n);
        return DensityMatrix(n, Matrix::Zero(d, d));
    }

    static DensityMatrix from_pure(const Statevector& s) {
        check_size(s.num_qubits());
        const Vector v = to_eigen(s);
        return DensityMatrix(s.num_qubits(), v * v.adjoint());
    }

    int num_qubits() const {
        return n_;
    }
    const Matrix& matrix() const {
        return mat_;
    }
    Matrix& matrix() {
        return mat_;
    }

    Complex trace() const {
        return mat_.trace();
    }

    bool is_hermitian(double tol = kDefaultTolerance) const {
        return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() <= tol;
    }

    /// U rho U^dagger.
    DensityMatrix conjugated(const Matrix& u) const {
        return DensityMatrix(n_, u * mat_ * u.adjoint());
    }

    DensityMatrix& operator+=(const DensityMatrix& o) {
        if (o.n_ != n_) {
            throw std::invalid_argument("density matrix dimensions differ");
        }
        mat_ += o.mat_;
        return *this;
    }

    DensityMatrix& operator-=(const DensityMatrix& o) {
        if (o.n_ != n_) {
            throw std::invalid_argument("density matrix dimensions differ");
        }
        mat_ -= o.mat_;
        return *this;
    }

    DensityMatrix& operator*=(double c) {
        mat_ *= c;
        return *this;
    }

  private:
    static int check_size(int n) {
        if (n < 1 || n > kMaxDensityMatrixQubits) {
            throw std::invalid_argument("density matrix supports 1.." + std::to_string(kMaxDensityMatrixQubits) +
                                        " qubits, got " + std::to_string(n));
        }
        return n;
    }

    int n_ = 0;
    Matrix mat_;
};

inline double max_abs_difference(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("density matrix dimensions differ");
    }
    return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

/// Dense unitary of a circuit, column x = run_circuit(|x>).
inline Matrix circuit_unitary(const Circuit& c, const ParamMap& params = {}) {
    const int n = c.num_qubits();
    if (n > kMaxDensityMatrixQubits) {
        throw std::invalid_argument("circuit too large for a dense unitary");
    }
    const Eigen::Index d = Eigen::Index{1} << n;
    Matrix u(d, d);
    for (Eigen::Index x = 0; x < d; ++x) {
        u.col(x) = to_eigen(run_circuit(c, Statevector::basis(n, static_cast<std::uint64_t>(x)), params));
    }
    return u;
}

/// Random pure state drawn from normalized complex Gaussians.
inline Statevector random_state(int n, Rng& rng) {
    std::normal_distribution<double> g;
    Statevector s(n);
    double norm = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = Complex(g(rng), g(rng));
        norm += std::norm(s[i]);
    }
    s *= Complex(1.0 / std::sqrt(norm), 0.0);
    return s;
}

}  // namespace flcu
