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

#include <span>
#include <vector>

#include "qert/common.hpp"
#include "qert/layout.hpp"

// Dense complex linear algebra for superoperators acting on d x d operators.
//
// Vectorization is row-major: vec(A) = (A_00, A_01, ..., A_{d-1,d-1}), which is
// the coordinate vector of (A (x) I)|Psi> for |Psi> = sum_j |jj>. With this
// convention the superoperator rho -> sum_m M_m rho M_m^dagger is represented
// by the d^2 x d^2 matrix sum_m M_m (x) conj(M_m). Do not switch to column
// stacking; every matrix representation in the project depends on it.
namespace qert::linalg {

CVector vec(const CMatrix& a);
CMatrix unvec(const CVector& v, Index d);
CMatrix kron(const CMatrix& a, const CMatrix& b);

double max_abs(const CMatrix& a);
bool is_hermitian(const CMatrix& a, double tol = tol::kHermitian);
CMatrix hermitian_part(const CMatrix& a);

// Non-empty family of d x d Kraus operators with sum M^dagger M <= I.
class KrausSet {
public:
    explicit KrausSet(std::vector<CMatrix> operators, double tol = tol::kComplete);

    Index dim() const { return dim_; }
    const std::vector<CMatrix>& operators() const { return ops_; }

    // sum_m M_m a M_m^dagger
    CMatrix apply(const CMatrix& a) const;
    // sum_m M_m^dagger a M_m
    CMatrix apply_dual(const CMatrix& a) const;

private:
    std::vector<CMatrix> ops_;
    Index dim_ = 0;
};

// d^2 x d^2 matrix representation of a superoperator on d x d operators.
class SuperOpMatrix {
public:
    SuperOpMatrix() = default;
    SuperOpMatrix(Index dim, CMatrix matrix);

    static SuperOpMatrix identity(Index dim);
    static SuperOpMatrix zero(Index dim);

    Index dim() const { return dim_; }
    const CMatrix& matrix() const { return m_; }

    CMatrix apply(const CMatrix& a) const;

    // (a * b) represents a after b.
    friend SuperOpMatrix operator*(const SuperOpMatrix& a, const SuperOpMatrix& b);
    friend SuperOpMatrix operator+(const SuperOpMatrix& a, const SuperOpMatrix& b);

private:
    Index dim_ = 0;
    CMatrix m_;
};

SuperOpMatrix superop_matrix(const KrausSet& kraus);
// Representation of the dual (Heisenberg-picture) map: the conjugate transpose.
SuperOpMatrix dual_matrix(const SuperOpMatrix& m);

struct SchurForm {
    CMatrix t;  // upper triangular
    CMatrix u;  // unitary, input = u t u^dagger
};

SchurForm schur(const CMatrix& a);

// Swaps the adjacent diagonal entries k and k+1 of the Schur form in place
// with a single Givens rotation, keeping u t u^dagger fixed.
void swap_schur_pair(SchurForm& s, Index k);

// Split of a transfer matrix R into its peripheral (|lambda| >= 1 - eps) and
// contractive parts. `contractive` equals R on the contractive invariant
// subspace and vanishes on the peripheral one; `peripheral_projector` is the
// spectral projector onto the peripheral generalized eigenspace along the
// contractive one.
struct SpectralSplit {
    CMatrix contractive;
    CMatrix peripheral_projector;
    double eps_spec = tol::kEpsSpec;
    Index peripheral_count = 0;
    std::vector<Complex> eigenvalues;
};

SpectralSplit spectral_split(const CMatrix& r, double eps_spec = tol::kEpsSpec);

// (I - n)^{-1}, the sum of the Neumann series of a contractive matrix.
CMatrix neumann_sum(const CMatrix& n, double eps_spec = tol::kEpsSpec);

struct HermitianEigensystem {
    Eigen::VectorXd values;  // ascending
    CMatrix vectors;         // orthonormal columns
};

HermitianEigensystem hermitian_eigensystem(const CMatrix& a);

// Lifts an operator on the listed target variables to the full layout.
CMatrix embed(const CMatrix& a, std::span<const QuantumVariable> targets, const Layout& layout);

}  // namespace qert::linalg
