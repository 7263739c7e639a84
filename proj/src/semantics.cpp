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

#include "qert/semantics.hpp"

#include <cmath>

namespace qert {

using linalg::SuperOpMatrix;

namespace {

void check_positive(const CMatrix& m, double tol, const char* what) {
    if (m.rows() != m.cols())
        throw Error(std::string(what) + ": matrix is not square");
    if (!linalg::is_hermitian(m, tol))
        throw Error(std::string(what) + ": matrix is not Hermitian");
    if (m.rows() == 0)
        return;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(linalg::hermitian_part(m), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol)
        throw Error(std::string(what) + ": matrix has a negative eigenvalue " +
                    std::to_string(es.eigenvalues().minCoeff()));
}

SuperOpMatrix single_kraus(const CMatrix& m) {
    return {m.rows(), linalg::kron(m, m.conjugate())};
}

}  // namespace

DensityMatrix::DensityMatrix(CMatrix m, double tol) : m_(std::move(m)) {
    check_positive(m_, tol, "DensityMatrix");
    if (trace() > 1.0 + tol)
        throw Error("DensityMatrix: trace " + std::to_string(trace()) + " exceeds 1");
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
    if (std::abs(psi.norm() - 1.0) > 1e-9)
        throw Error("DensityMatrix::pure: state is not normalized");
    return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
    return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

Observable::Observable(CMatrix m, double tol) : m_(std::move(m)) {
    check_positive(m_, tol, "Observable");
}

Observable Observable::identity(Index dim) {
    return Observable(CMatrix::Identity(dim, dim));
}

Observable Observable::zero(Index dim) {
    return Observable(CMatrix::Zero(dim, dim));
}

double Observable::expectation(const DensityMatrix& rho) const {
    if (rho.dim() != dim())
        throw Error("Observable::expectation: dimension mismatch");
    return (m_ * rho.matrix()).trace().real();
}

const Guard& GuardOps::at(int label) const {
    auto it = outcomes.find(label);
    if (it == outcomes.end())
        throw Error("GuardOps: no outcome " + std::to_string(label));
    return it->second;
}

GuardOps guard_ops(const MeasurementDecl& meas, const std::vector<QuantumVariable>& targets,
                   const Layout& layout) {
    GuardOps g;
    for (const auto& o : meas.outcomes) {
        CMatrix op = linalg::embed(o.op, targets, layout);
        SuperOpMatrix s = single_kraus(op);
        g.outcomes.emplace(o.label, Guard{std::move(op), std::move(s)});
    }
    return g;
}

linalg::KrausSet init_kraus(const QuantumVariable& var, const Layout& layout, const CMatrix& basis) {
    const auto d = static_cast<Index>(var.dim);
    CMatrix b = basis.size() == 0 ? CMatrix::Identity(d, d) : basis;
    if (b.rows() != d || b.cols() != d)
        throw Error("init_kraus: basis does not match the dimension of '" + var.name + "'");
    if (linalg::max_abs(b.adjoint() * b - CMatrix::Identity(d, d)) > tol::kUnitary)
        throw Error("init_kraus: basis is not orthonormal");
    std::vector<CMatrix> ops;
    const std::vector<QuantumVariable> targets{var};
    for (Index n = 0; n < d; ++n) {
        CMatrix local = CMatrix::Zero(d, d);
        local.row(0) = b.col(n).adjoint();  // |0><b_n|
        ops.push_back(linalg::embed(local, targets, layout));
    }
    return linalg::KrausSet(std::move(ops));
}

SemanticsContext::SemanticsContext(Layout layout, double eps_spec)
    : layout_(std::move(layout)), eps_spec_(eps_spec) {}

const GuardOps& SemanticsContext::guards(const Program& node) {
    if (auto it = guards_.find(node.id()); it != guards_.end())
        return it->second.value;
    GuardOps g;
    if (node.is<ast::Case>())
        g = guard_ops(*node.as<ast::Case>().meas, node.as<ast::Case>().targets, layout_);
    else if (node.is<ast::While>())
        g = guard_ops(*node.as<ast::While>().meas, node.as<ast::While>().targets, layout_);
    else
        throw Error("SemanticsContext::guards: node is not a branching statement");
    return guards_.emplace(node.id(), Entry<GuardOps>{node, std::move(g)}).first->second.value;
}

const CMatrix& SemanticsContext::gate(const Program& node) {
    if (auto it = gates_.find(node.id()); it != gates_.end())
        return it->second.value;
    if (!node.is<ast::Unitary>())
        throw Error("SemanticsContext::gate: node is not a unitary statement");
    const auto& u = node.as<ast::Unitary>();
    CMatrix m = linalg::embed(u.gate->matrix, u.targets, layout_);
    return gates_.emplace(node.id(), Entry<CMatrix>{node, std::move(m)}).first->second.value;
}

const LoopClosure& SemanticsContext::loop(const Program& node) {
    if (auto it = loops_.find(node.id()); it != loops_.end())
        return *it->second.value;
    if (!node.is<ast::While>())
        throw Error("SemanticsContext::loop: node is not a while loop");
    auto c = std::make_unique<LoopClosure>();
    c->guards = guards(node);
    c->body = denote(node.as<ast::While>().body);
    c->transfer = c->body * c->guards.e1().superop;
    c->split = linalg::spectral_split(c->transfer.matrix(), eps_spec_);
    c->resolvent = linalg::neumann_sum(c->split.contractive, eps_spec_);
    c->semantics = c->guards.e0().superop * SuperOpMatrix(dim(), c->resolvent);
    const LoopClosure& ref = *c;
    loops_.emplace(node.id(), Entry<std::unique_ptr<LoopClosure>>{node, std::move(c)});
    return ref;
}

const SuperOpMatrix& SemanticsContext::denote(const Program& p) {
    if (auto it = denote_.find(p.id()); it != denote_.end())
        return it->second.value;
    SuperOpMatrix out;
    if (p.is<ast::Skip>()) {
        out = SuperOpMatrix::identity(dim());
    } else if (p.is<ast::Init>()) {
        out = linalg::superop_matrix(init_kraus(p.as<ast::Init>().var, layout_));
    } else if (p.is<ast::Unitary>()) {
        out = single_kraus(gate(p));
    } else if (p.is<ast::Seq>()) {
        const auto& s = p.as<ast::Seq>();
        const SuperOpMatrix first = denote(s.first);
        out = denote(s.second) * first;
    } else if (p.is<ast::Case>()) {
        const auto& c = p.as<ast::Case>();
        const GuardOps g = guards(p);
        out = SuperOpMatrix::zero(dim());
        for (const auto& [label, branch] : c.branches)
            out = out + denote(branch) * g.at(label).superop;
    } else {
        out = loop(p).semantics;
    }
    return denote_.emplace(p.id(), Entry<SuperOpMatrix>{p, std::move(out)}).first->second.value;
}

SuperOpMatrix denote(const Program& program, const Layout& layout, double eps_spec) {
    SemanticsContext ctx(layout, eps_spec);
    return ctx.denote(program);
}

CMatrix apply(const SuperOpMatrix& superop, const CMatrix& a) {
    if (a.rows() != superop.dim() || a.cols() != superop.dim())
        throw Error("apply: dimension mismatch");
    return linalg::unvec(superop.matrix() * linalg::vec(a), superop.dim());
}

CMatrix dual_apply(const SuperOpMatrix& superop, const CMatrix& a) {
    if (a.rows() != superop.dim() || a.cols() != superop.dim())
        throw Error("dual_apply: dimension mismatch");
    return linalg::unvec(superop.matrix().adjoint() * linalg::vec(a), superop.dim());
}

DensityMatrix apply(const SuperOpMatrix& superop, const DensityMatrix& rho) {
    return DensityMatrix(linalg::hermitian_part(apply(superop, rho.matrix())));
}

Observable dual_apply(const SuperOpMatrix& superop, const Observable& obs) {
    return Observable(linalg::hermitian_part(dual_apply(superop, obs.matrix())));
}

}  // namespace qert
