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

#include "qert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace qert::linalg {

CVector vec(const CMatrix& a) {
    if (a.rows() != a.cols())
        throw Error("vec: matrix is not square");
    const Index d = a.rows();
    CVector v(d * d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            v(i * d + j) = a(i, j);
    return v;
}

CMatrix unvec(const CVector& v, Index d) {
    if (d < 0 || v.size() != d * d)
        throw Error("unvec: vector length " + std::to_string(v.size()) + " is not " +
                    std::to_string(d) + "^2");
    CMatrix a(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            a(i, j) = v(i * d + j);
    return a;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double max_abs(const CMatrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMatrix& a, double tol) {
    return a.rows() == a.cols() && max_abs(a - a.adjoint()) <= tol;
}

CMatrix hermitian_part(const CMatrix& a) {
    return (a + a.adjoint()) * 0.5;
}

// ---------------------------------------------------------------------------
// KrausSet / SuperOpMatrix

KrausSet::KrausSet(std::vector<CMatrix> operators, double tol) : ops_(std::move(operators)) {
    if (ops_.empty())
        throw Error("KrausSet: no operators");
    dim_ = ops_.front().rows();
    CMatrix sum = CMatrix::Zero(dim_, dim_);
    for (const auto& m : ops_) {
        if (m.rows() != dim_ || m.cols() != dim_)
            throw Error("KrausSet: operators must all be square of the same dimension");
        sum += m.adjoint() * m;
    }
    // sum M^dagger M is PSD; trace non-increase means its top eigenvalue is <= 1.
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(sum), Eigen::EigenvaluesOnly);
    if (dim_ > 0 && es.eigenvalues().maxCoeff() > 1.0 + tol)
        throw Error("KrausSet: operators increase trace");
}

CMatrix KrausSet::apply(const CMatrix& a) const {
    CMatrix out = CMatrix::Zero(dim_, dim_);
    for (const auto& m : ops_)
        out += m * a * m.adjoint();
    return out;
}

CMatrix KrausSet::apply_dual(const CMatrix& a) const {
    CMatrix out = CMatrix::Zero(dim_, dim_);
    for (const auto& m : ops_)
        out += m.adjoint() * a * m;
    return out;
}

SuperOpMatrix::SuperOpMatrix(Index dim, CMatrix matrix) : dim_(dim), m_(std::move(matrix)) {
    if (m_.rows() != dim * dim || m_.cols() != dim * dim)
        throw Error("SuperOpMatrix: matrix is not d^2 x d^2");
}

SuperOpMatrix SuperOpMatrix::identity(Index dim) {
    return {dim, CMatrix::Identity(dim * dim, dim * dim)};
}

SuperOpMatrix SuperOpMatrix::zero(Index dim) {
    return {dim, CMatrix::Zero(dim * dim, dim * dim)};
}

CMatrix SuperOpMatrix::apply(const CMatrix& a) const {
    if (a.rows() != dim_ || a.cols() != dim_)
        throw Error("SuperOpMatrix::apply: dimension mismatch");
    return unvec(m_ * vec(a), dim_);
}

SuperOpMatrix operator*(const SuperOpMatrix& a, const SuperOpMatrix& b) {
    if (a.dim_ != b.dim_)
        throw Error("superoperator composition: dimension mismatch");
    return {a.dim_, a.m_ * b.m_};
}

SuperOpMatrix operator+(const SuperOpMatrix& a, const SuperOpMatrix& b) {
    if (a.dim_ != b.dim_)
        throw Error("superoperator sum: dimension mismatch");
    return {a.dim_, a.m_ + b.m_};
}

SuperOpMatrix superop_matrix(const KrausSet& kraus) {
    const Index d = kraus.dim();
    CMatrix m = CMatrix::Zero(d * d, d * d);
    for (const auto& op : kraus.operators())
        m += kron(op, op.conjugate());
    return {d, std::move(m)};
}

SuperOpMatrix dual_matrix(const SuperOpMatrix& m) {
    return {m.dim(), m.matrix().adjoint()};
}

// ---------------------------------------------------------------------------
// Schur form and spectral splitting

SchurForm schur(const CMatrix& a) {
    if (a.rows() != a.cols())
        throw Error("schur: matrix is not square");
    const Index n = a.rows();
    SchurForm s{a, CMatrix(n, n)};
    if (n == 0)
        return s;
    CVector w(n);
    lapack_int sdim = 0;
    const lapack_int info =
        LAPACKE_zgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, static_cast<lapack_int>(n), s.t.data(),
                      static_cast<lapack_int>(n), &sdim, w.data(), s.u.data(),
                      static_cast<lapack_int>(n));
    if (info != 0)
        throw Error("schur: zgees failed with info " + std::to_string(info));
    s.t.triangularView<Eigen::StrictlyLower>().setZero();
    return s;
}

void swap_schur_pair(SchurForm& s, Index k) {
    const Complex a = s.t(k, k);
    const Complex b = s.t(k + 1, k + 1);
    const Complex c = s.t(k, k + 1);
    // v = (c, b - a) is the eigenvector of the 2x2 block for eigenvalue b.
    Complex v0 = c;
    Complex v1 = b - a;
    const double norm = std::hypot(std::abs(v0), std::abs(v1));
    if (norm == 0.0)
        return;
    v0 /= norm;
    v1 /= norm;
    Eigen::Matrix2cd g;
    g << v0, -std::conj(v1), v1, std::conj(v0);

    s.t.middleCols(k, 2) = s.t.middleCols(k, 2) * g;
    s.t.middleRows(k, 2) = g.adjoint() * s.t.middleRows(k, 2);
    s.u.middleCols(k, 2) = s.u.middleCols(k, 2) * g;
    s.t(k + 1, k) = 0.0;
    s.t(k, k) = b;
    s.t(k + 1, k + 1) = a;
}

namespace {

// Solves t11 y - y t22 = rhs for upper-triangular t11, t22 with disjoint spectra.
CMatrix solve_triangular_sylvester(const CMatrix& t11, const CMatrix& t22, const CMatrix& rhs) {
    const Index p = t11.rows();
    const Index q = t22.rows();
    CMatrix y(p, q);
    for (Index j = 0; j < q; ++j) {
        CVector col = rhs.col(j);
        for (Index i = 0; i < j; ++i)
            col += y.col(i) * t22(i, j);
        CMatrix shifted = t11;
        shifted.diagonal().array() -= t22(j, j);
        y.col(j) = shifted.triangularView<Eigen::Upper>().solve(col);
    }
    return y;
}

}  // namespace

SpectralSplit spectral_split(const CMatrix& r, double eps_spec) {
    if (r.rows() != r.cols())
        throw Error("spectral_split: matrix is not square");
    const Index n = r.rows();
    SchurForm s = schur(r);

    SpectralSplit out;
    out.eps_spec = eps_spec;
    out.eigenvalues.reserve(n);
    for (Index i = 0; i < n; ++i) {
        const Complex lambda = s.t(i, i);
        out.eigenvalues.push_back(lambda);
        if (std::abs(lambda) > 1.0 + eps_spec) {
            std::ostringstream msg;
            msg << "spectral_split: eigenvalue " << lambda << " has modulus "
                << std::abs(lambda) << " > 1; the transfer matrix increases trace";
            throw Error(msg.str());
        }
    }

    auto peripheral = [&](Index i) { return std::abs(s.t(i, i)) >= 1.0 - eps_spec; };

    // Bubble every peripheral eigenvalue to the leading block.
    Index p = 0;
    for (Index i = 0; i < n; ++i) {
        if (!peripheral(i))
            continue;
        for (Index k = i; k > p; --k)
            swap_schur_pair(s, k - 1);
        ++p;
    }
    out.peripheral_count = p;
    const Index q = n - p;

    if (p == 0) {
        out.contractive = r;
        out.peripheral_projector = CMatrix::Zero(n, n);
        return out;
    }
    if (q == 0) {
        out.contractive = CMatrix::Zero(n, n);
        out.peripheral_projector = CMatrix::Identity(n, n);
        return out;
    }

    const CMatrix t11 = s.t.topLeftCorner(p, p);
    const CMatrix t12 = s.t.topRightCorner(p, q);
    const CMatrix t22 = s.t.bottomRightCorner(q, q);
    // With W = [[I, Y], [0, I]] and t11 Y - Y t22 = -t12, T = W diag(t11, t22) W^{-1}.
    const CMatrix y = solve_triangular_sylvester(t11, t22, -t12);

    CMatrix n_block = CMatrix::Zero(n, n);
    n_block.topRightCorner(p, q) = y * t22;
    n_block.bottomRightCorner(q, q) = t22;
    CMatrix p_block = CMatrix::Zero(n, n);
    p_block.topLeftCorner(p, p).setIdentity();
    p_block.topRightCorner(p, q) = -y;

    out.contractive = s.u * n_block * s.u.adjoint();
    out.peripheral_projector = s.u * p_block * s.u.adjoint();
    return out;
}

CMatrix neumann_sum(const CMatrix& n, double eps_spec) {
    if (n.rows() != n.cols())
        throw Error("neumann_sum: matrix is not square");
    const Index d = n.rows();
    const CMatrix a = CMatrix::Identity(d, d) - n;
    Eigen::PartialPivLU<CMatrix> lu(a);
    if (d > 0 && !(lu.rcond() > eps_spec * 1e-6))
        throw Error("neumann_sum: I - N is singular; a peripheral eigenvalue was not removed");
    CMatrix x = lu.inverse();
    const double residual = max_abs(a * x - CMatrix::Identity(d, d));
    if (!(residual < tol::kNeumannResidual))
        throw Error("neumann_sum: residual " + std::to_string(residual) + " too large");
    return x;
}

HermitianEigensystem hermitian_eigensystem(const CMatrix& a) {
    if (!is_hermitian(a))
        throw Error("hermitian_eigensystem: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a));
    if (es.info() != Eigen::Success)
        throw Error("hermitian_eigensystem: eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

// ---------------------------------------------------------------------------
// embed

CMatrix embed(const CMatrix& a, std::span<const QuantumVariable> targets, const Layout& layout) {
    std::vector<std::size_t> pos;
    pos.reserve(targets.size());
    for (const auto& t : targets) {
        auto p = layout.position(t.name);
        if (!p)
            throw Error("embed: variable '" + t.name + "' is not in the layout");
        if (layout.variables()[*p].dim != t.dim)
            throw Error("embed: dimension of '" + t.name + "' does not match the layout");
        if (std::find(pos.begin(), pos.end(), *p) != pos.end())
            throw Error("embed: duplicate target '" + t.name + "'");
        pos.push_back(*p);
    }
    const auto local_dim = static_cast<Index>(product_dim(targets));
    if (a.rows() != local_dim || a.cols() != local_dim)
        throw Error("embed: operator is " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " but targets span dimension " +
                    std::to_string(local_dim));

    const auto d = static_cast<Index>(layout.total_dim());
    const auto& vars = layout.variables();
    // local[i]: index into `a`; rest[i]: basis index with the target digits cleared.
    std::vector<Index> local(d), rest(d);
    for (Index i = 0; i < d; ++i) {
        Index loc = 0;
        Index r = i;
        for (std::size_t t = 0; t < pos.size(); ++t) {
            const auto stride = static_cast<Index>(layout.stride(pos[t]));
            const auto digit = (i / stride) % static_cast<Index>(vars[pos[t]].dim);
            loc = loc * static_cast<Index>(vars[pos[t]].dim) + digit;
            r -= digit * stride;
        }
        local[i] = loc;
        rest[i] = r;
    }
    CMatrix out = CMatrix::Zero(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            if (rest[i] == rest[j])
                out(i, j) = a(local[i], local[j]);
    return out;
}

}  // namespace qert::linalg
