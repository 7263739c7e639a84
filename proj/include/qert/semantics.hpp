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

#include <map>
#include <memory>
#include <unordered_map>

#include "qert/linalg.hpp"
#include "qert/program.hpp"

namespace qert {

// Partial density operator: Hermitian, positive, trace at most one.
class DensityMatrix {
public:
    explicit DensityMatrix(CMatrix m, double tol = tol::kHermitian);

    static DensityMatrix pure(const CVector& psi);
    static DensityMatrix maximally_mixed(Index dim);

    Index dim() const { return m_.rows(); }
    const CMatrix& matrix() const { return m_; }
    double trace() const { return m_.trace().real(); }

private:
    CMatrix m_;
};

// Hermitian positive semidefinite operator.
class Observable {
public:
    explicit Observable(CMatrix m, double tol = tol::kHermitian);

    static Observable identity(Index dim);
    static Observable zero(Index dim);

    Index dim() const { return m_.rows(); }
    const CMatrix& matrix() const { return m_; }

    // tr(A rho)
    double expectation(const DensityMatrix& rho) const;

private:
    CMatrix m_;
};

struct Guard {
    CMatrix op;  // M_m lifted to the full space
    linalg::SuperOpMatrix superop;
};

// Outcome-indexed single-Kraus maps E_m(rho) = M_m rho M_m^dagger.
struct GuardOps {
    std::map<int, Guard> outcomes;

    const Guard& at(int label) const;
    const Guard& e0() const { return at(0); }
    const Guard& e1() const { return at(1); }
};

GuardOps guard_ops(const MeasurementDecl& meas, const std::vector<QuantumVariable>& targets,
                   const Layout& layout);

// Kraus set {|0><b_n|} of the initialization rule, lifted to the layout. The
// columns of `basis` give the orthonormal basis {b_n}; empty means computational.
linalg::KrausSet init_kraus(const QuantumVariable& var, const Layout& layout,
                            const CMatrix& basis = CMatrix());

struct LoopClosure {
    GuardOps guards;
    linalg::SuperOpMatrix body;       // [[S]]
    linalg::SuperOpMatrix transfer;   // M_[[S]] M_E1
    linalg::SpectralSplit split;      // of transfer
    CMatrix resolvent;                // (I - N')^{-1}
    linalg::SuperOpMatrix semantics;  // M_E0 (I - N')^{-1}
};

// Memoized structural semantics for one layout. Caches are keyed by AST node
// and live only as long as the context.
class SemanticsContext {
public:
    explicit SemanticsContext(Layout layout, double eps_spec = tol::kEpsSpec);

    const Layout& layout() const { return layout_; }
    Index dim() const { return static_cast<Index>(layout_.total_dim()); }
    double eps_spec() const { return eps_spec_; }

    const linalg::SuperOpMatrix& denote(const Program& program);
    const LoopClosure& loop(const Program& while_node);
    const GuardOps& guards(const Program& branching_node);
    const CMatrix& gate(const Program& unitary_node);

private:
    template <class T>
    struct Entry {
        Program owner;  // pins the node so its address stays unique
        T value;
    };

    Layout layout_;
    double eps_spec_;
    std::unordered_map<const void*, Entry<linalg::SuperOpMatrix>> denote_;
    std::unordered_map<const void*, Entry<std::unique_ptr<LoopClosure>>> loops_;
    std::unordered_map<const void*, Entry<GuardOps>> guards_;
    std::unordered_map<const void*, Entry<CMatrix>> gates_;
};

linalg::SuperOpMatrix denote(const Program& program, const Layout& layout,
                             double eps_spec = tol::kEpsSpec);

DensityMatrix apply(const linalg::SuperOpMatrix& superop, const DensityMatrix& rho);
Observable dual_apply(const linalg::SuperOpMatrix& superop, const Observable& obs);

// Unchecked variants on raw matrices.
CMatrix apply(const linalg::SuperOpMatrix& superop, const CMatrix& a);
CMatrix dual_apply(const linalg::SuperOpMatrix& superop, const CMatrix& a);

}  // namespace qert
