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

#include "qert/runtime.hpp"

namespace qert {

ErtValue ErtValue::finite(double value) {
    if (!(value >= 0.0))
        throw Error("ErtValue: negative runtime " + std::to_string(value));
    ErtValue v;
    v.value_ = value;
    return v;
}

double ErtValue::value() const {
    if (!value_)
        throw Error("ErtValue: runtime is infinite");
    return *value_;
}

Analyzer::Analyzer(Layout layout, AnalysisOptions options)
    : options_(options), sem_(std::move(layout), options.eps_spec) {}

const Observable& Analyzer::termination_operator(const Program& program) {
    return termination(program).b;
}

const TerminationInfo& Analyzer::termination(const Program& program) {
    if (auto it = term_.find(program.id()); it != term_.end())
        return it->second.value;
    const Index d = sem_.dim();
    Observable b = dual_apply(sem_.denote(program), Observable::identity(d));
    auto eig = linalg::hermitian_eigensystem(b.matrix());
    CMatrix p = CMatrix::Zero(d, d);
    Index rank = 0;
    for (Index i = 0; i < d; ++i) {
        if (eig.values(i) >= 1.0 - options_.eps_term) {
            p += eig.vectors.col(i) * eig.vectors.col(i).adjoint();
            ++rank;
        }
    }
    TerminationInfo info{std::move(b), std::move(p), rank};
    return term_.emplace(program.id(), Entry<TerminationInfo>{program, std::move(info)})
        .first->second.value;
}

CMatrix Analyzer::loop_series(const Program& node, const CMatrix& x) {
    const LoopClosure& c = sem_.loop(node);
    const Index d = sem_.dim();
    // The transfer map of the dual loop is the adjoint of the forward one, so
    // its contractive part and resolvent are adjoints as well.
    const CMatrix y = linalg::unvec(c.resolvent.adjoint() * linalg::vec(x), d);
    const CMatrix& p = termination(node).projector;
    return p * y * p;
}

const Observable& Analyzer::ert(const Program& p) {
    if (auto it = ert_.find(p.id()); it != ert_.end())
        return it->second.value;
    const Index d = sem_.dim();
    const CMatrix id = CMatrix::Identity(d, d);
    CMatrix out;
    if (p.is<ast::Skip>()) {
        out = CMatrix::Zero(d, d);
    } else if (p.is<ast::Init>() || p.is<ast::Unitary>()) {
        out = id;
    } else if (p.is<ast::Seq>()) {
        const auto& s = p.as<ast::Seq>();
        const CMatrix first = ert(s.first).matrix();
        out = first + dual_apply(sem_.denote(s.first), ert(s.second).matrix());
    } else if (p.is<ast::Case>()) {
        const auto& c = p.as<ast::Case>();
        const GuardOps& g = sem_.guards(p);
        out = id;
        for (const auto& [label, branch] : c.branches)
            out += dual_apply(g.at(label).superop, ert(branch).matrix());
    } else {
        const auto& w = p.as<ast::While>();
        const CMatrix body = ert(w.body).matrix();
        const GuardOps& g = sem_.guards(p);
        out = loop_series(p, id + dual_apply(g.e1().superop, body));
    }
    Observable obs(linalg::hermitian_part(out));
    return ert_.emplace(p.id(), Entry<Observable>{p, std::move(obs)}).first->second.value;
}

bool Analyzer::almost_surely_terminates(const Program& program, const DensityMatrix& rho) {
    if (rho.dim() != sem_.dim())
        throw Error("density matrix has dimension " + std::to_string(rho.dim()) +
                    " but the program acts on dimension " + std::to_string(sem_.dim()));
    return termination(program).b.expectation(rho) >= rho.trace() - options_.tol_ast;
}

ErtValue Analyzer::expected_runtime(const Program& program, const DensityMatrix& rho) {
    if (!almost_surely_terminates(program, rho))
        return ErtValue::infinite();
    return ErtValue::finite(std::max(0.0, ert(program).expectation(rho)));
}

double Analyzer::runtime_bound(const Program& program) {
    const auto& m = ert(program).matrix();
    if (m.rows() == 0)
        return 0.0;
    return std::max(0.0, linalg::hermitian_eigensystem(m.eval()).values.maxCoeff());
}

Observable termination_operator(const Program& program, const Layout& layout,
                                const AnalysisOptions& options) {
    return Analyzer(layout, options).termination_operator(program);
}

TerminationInfo termination_projector(const Program& program, const Layout& layout,
                                      const AnalysisOptions& options) {
    return Analyzer(layout, options).termination(program);
}

Observable ert_observable(const Program& program, const Layout& layout,
                          const AnalysisOptions& options) {
    return Analyzer(layout, options).ert(program);
}

ErtValue expected_runtime(const Program& program, const Layout& layout, const DensityMatrix& rho,
                          const AnalysisOptions& options) {
    return Analyzer(layout, options).expected_runtime(program, rho);
}

double runtime_bound(const Program& program, const Layout& layout,
                     const AnalysisOptions& options) {
    return Analyzer(layout, options).runtime_bound(program);
}

}  // namespace qert
