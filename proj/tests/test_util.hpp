// Copyright 2026 The qert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "qert/common.hpp"
#include "qert/linalg.hpp"
#include "qert/program.hpp"

namespace qert::testing {

using Rng = std::mt19937_64;

inline double gauss(Rng& rng) {
    return std::normal_distribution<double>(0.0, 1.0)(rng);
}

inline CMatrix random_matrix(Rng& rng, Index rows, Index cols) {
    CMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            m(i, j) = Complex(gauss(rng), gauss(rng));
    return m;
}

inline CVector random_state(Rng& rng, Index d) {
    CVector v = random_matrix(rng, d, 1).col(0);
    return v / v.norm();
}

// Haar-ish unitary from the QR factor of a Gaussian matrix.
inline CMatrix random_unitary(Rng& rng, Index d) {
    Eigen::HouseholderQR<CMatrix> qr(random_matrix(rng, d, d));
    CMatrix q = qr.householderQ();
    return q;
}

inline CMatrix random_hermitian(Rng& rng, Index d) {
    CMatrix a = random_matrix(rng, d, d);
    return (a + a.adjoint()) * 0.5;
}

// Random density matrix with trace exactly `trace`.
inline CMatrix random_density(Rng& rng, Index d, double trace = 1.0) {
    CMatrix g = random_matrix(rng, d, d);
    CMatrix rho = g * g.adjoint();
    return rho * (trace / rho.trace().real());
}

// Trace-nonincreasing Kraus set: blocks of a random isometry, optionally scaled.
inline std::vector<CMatrix> random_kraus(Rng& rng, Index d, int count, double scale = 1.0) {
    const CMatrix u = random_unitary(rng, d * count);
    std::vector<CMatrix> ops;
    for (int k = 0; k < count; ++k)
        ops.push_back(u.block(k * d, 0, d, d) * scale);
    return ops;
}

inline CMatrix apply_kraus(const std::vector<CMatrix>& ops, const CMatrix& a) {
    CMatrix out = CMatrix::Zero(a.rows(), a.cols());
    for (const auto& m : ops)
        out += m * a * m.adjoint();
    return out;
}

inline CMatrix apply_kraus_dual(const std::vector<CMatrix>& ops, const CMatrix& a) {
    CMatrix out = CMatrix::Zero(a.rows(), a.cols());
    for (const auto& m : ops)
        out += m.adjoint() * a * m;
    return out;
}

inline double max_abs(const CMatrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline CMatrix ket_bra(Index d, Index i, Index j) {
    CMatrix m = CMatrix::Zero(d, d);
    m(i, j) = 1.0;
    return m;
}

// Random well-formed program over `vars` (qubits and qutrits), depth-bounded.
class ProgramGen {
public:
    ProgramGen(Rng& rng, std::vector<QuantumVariable> vars) : rng_(rng), vars_(std::move(vars)) {}

    Program make(int depth) {
        const int choice = pick(depth <= 0 ? 3 : 6);
        switch (choice) {
        case 0:
            return Program::skip();
        case 1:
            return Program::init(any_var());
        case 2:
            return unitary();
        case 3:
            return Program::seq(make(depth - 1), make(depth - 1));
        case 4: {
            const auto v = any_var();
            auto meas = builtin_measurement("std", {v.dim});
            std::map<int, Program> branches;
            for (const auto& o : meas->outcomes)
                branches.emplace(o.label, make(depth - 1));
            return Program::cases(meas, {v}, std::move(branches));
        }
        default: {
            const auto v = qubit();
            // A Hadamard inside the body keeps the loop almost surely terminating.
            Program body = Program::seq(make(depth - 2), Program::unitary(builtin_gate("H", {2}), {v}));
            return Program::loop(builtin_measurement("std", {2}), {v}, body);
        }
        }
    }

private:
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

    QuantumVariable any_var() { return vars_[static_cast<std::size_t>(pick(static_cast<int>(vars_.size())))]; }

    QuantumVariable qubit() {
        for (int tries = 0; tries < 32; ++tries) {
            auto v = any_var();
            if (v.dim == 2)
                return v;
        }
        for (const auto& v : vars_)
            if (v.dim == 2)
                return v;
        throw Error("ProgramGen: no qubit variable");
    }

    Program unitary() {
        const auto v = any_var();
        if (v.dim == 2 && pick(2) == 0)
            return Program::unitary(builtin_gate(pick(2) ? "H" : "X", {2}), {v});
        const auto d = static_cast<Index>(v.dim);
        auto g = std::make_shared<const UnitaryDecl>(
            UnitaryDecl{"G" + std::to_string(counter_++), random_unitary(rng_, d), {v.dim}, false});
        return Program::unitary(g, {v});
    }

    Rng& rng_;
    std::vector<QuantumVariable> vars_;
    int counter_ = 0;
};

}  // namespace qert::testing
