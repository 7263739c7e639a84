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

#include "qert/program.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "qert/linalg.hpp"

namespace qert {

namespace {

std::string dims_string(const std::vector<std::size_t>& dims) {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < dims.size(); ++i)
        out << (i ? "," : "") << dims[i];
    out << ")";
    return out.str();
}

std::vector<std::size_t> dims_of(const std::vector<QuantumVariable>& vars) {
    std::vector<std::size_t> out;
    out.reserve(vars.size());
    for (const auto& v : vars)
        out.push_back(v.dim);
    return out;
}

std::size_t product(const std::vector<std::size_t>& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

bool same_matrix(const CMatrix& a, const CMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

}  // namespace

const MeasurementOutcome* MeasurementDecl::outcome(int label) const {
    for (const auto& o : outcomes)
        if (o.label == label)
            return &o;
    return nullptr;
}

bool same_decl(const UnitaryDecl& a, const UnitaryDecl& b) {
    return a.name == b.name && a.arity == b.arity && a.builtin == b.builtin &&
           same_matrix(a.matrix, b.matrix);
}

bool same_decl(const MeasurementDecl& a, const MeasurementDecl& b) {
    if (a.name != b.name || a.arity != b.arity || a.builtin != b.builtin ||
        a.outcomes.size() != b.outcomes.size())
        return false;
    for (std::size_t i = 0; i < a.outcomes.size(); ++i)
        if (a.outcomes[i].label != b.outcomes[i].label ||
            !same_matrix(a.outcomes[i].op, b.outcomes[i].op))
            return false;
    return true;
}

bool is_builtin_name(std::string_view name) {
    return name == "H" || name == "X" || name == "I" || name == "std";
}

UnitaryRef builtin_gate(std::string_view name, const std::vector<std::size_t>& arity) {
    const auto d = static_cast<Index>(product(arity));
    CMatrix m;
    if (name == "H" && d == 2) {
        const double s = 1.0 / std::sqrt(2.0);
        m.resize(2, 2);
        m << s, s, s, -s;
    } else if (name == "X" && d == 2) {
        m.resize(2, 2);
        m << 0, 1, 1, 0;
    } else if (name == "I") {
        m = CMatrix::Identity(d, d);
    } else {
        return nullptr;
    }
    return std::make_shared<const UnitaryDecl>(
        UnitaryDecl{std::string(name), std::move(m), arity, true});
}

MeasurementRef builtin_measurement(std::string_view name, const std::vector<std::size_t>& arity) {
    if (name != "std")
        return nullptr;
    const auto d = static_cast<Index>(product(arity));
    MeasurementDecl decl{std::string(name), {}, arity, true};
    for (Index m = 0; m < d; ++m) {
        CMatrix op = CMatrix::Zero(d, d);
        op(m, m) = 1.0;
        decl.outcomes.push_back({static_cast<int>(m), std::move(op)});
    }
    return std::make_shared<const MeasurementDecl>(std::move(decl));
}

// ---------------------------------------------------------------------------
// Program

Program::Program() : Program(skip()) {}

Program Program::skip() {
    static const auto node = std::make_shared<const Node>(Node{ast::Skip{}});
    return Program(node);
}

Program Program::init(QuantumVariable var) {
    return Program(std::make_shared<const Node>(Node{ast::Init{std::move(var)}}));
}

Program Program::unitary(UnitaryRef gate, std::vector<QuantumVariable> targets) {
    if (!gate)
        throw Error("unitary statement without a gate");
    return Program(
        std::make_shared<const Node>(Node{ast::Unitary{std::move(gate), std::move(targets)}}));
}

Program Program::seq(Program first, Program second) {
    if (first.is<ast::Seq>()) {
        const auto& s = first.as<ast::Seq>();
        return seq(s.first, seq(s.second, std::move(second)));
    }
    return Program(
        std::make_shared<const Node>(Node{ast::Seq{std::move(first), std::move(second)}}));
}

Program Program::seq(const std::vector<Program>& parts) {
    if (parts.empty())
        return skip();
    Program out = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;)
        out = seq(parts[i], out);
    return out;
}

Program Program::cases(MeasurementRef meas, std::vector<QuantumVariable> targets,
                       std::map<int, Program> branches) {
    if (!meas)
        throw Error("case statement without a measurement");
    return Program(std::make_shared<const Node>(
        Node{ast::Case{std::move(meas), std::move(targets), std::move(branches)}}));
}

Program Program::loop(MeasurementRef meas, std::vector<QuantumVariable> targets, Program body) {
    if (!meas)
        throw Error("while loop without a measurement");
    return Program(std::make_shared<const Node>(
        Node{ast::While{std::move(meas), std::move(targets), std::move(body)}}));
}

bool operator==(const Program& a, const Program& b) {
    if (a.node_ == b.node_)
        return true;
    if (a.node_->v.index() != b.node_->v.index())
        return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node_->v);
            if constexpr (std::is_same_v<T, ast::Skip>) {
                return true;
            } else if constexpr (std::is_same_v<T, ast::Init>) {
                return x.var == y.var;
            } else if constexpr (std::is_same_v<T, ast::Unitary>) {
                return x.targets == y.targets && same_decl(*x.gate, *y.gate);
            } else if constexpr (std::is_same_v<T, ast::Seq>) {
                return x.first == y.first && x.second == y.second;
            } else if constexpr (std::is_same_v<T, ast::Case>) {
                return x.targets == y.targets && same_decl(*x.meas, *y.meas) &&
                       x.branches == y.branches;
            } else {
                return x.targets == y.targets && same_decl(*x.meas, *y.meas) && x.body == y.body;
            }
        },
        a.node_->v);
}

// ---------------------------------------------------------------------------
// Validation

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::NonUnitaryGate:
        return "non-unitary gate";
    case ViolationKind::IncompleteMeasurement:
        return "incomplete measurement";
    case ViolationKind::BadWhileGuardLabels:
        return "bad while-guard labels";
    case ViolationKind::UndeclaredVariable:
        return "undeclared variable";
    case ViolationKind::DimensionMismatch:
        return "dimension mismatch";
    case ViolationKind::DuplicateTarget:
        return "duplicate target";
    case ViolationKind::CaseBranchMismatch:
        return "case branch mismatch";
    case ViolationKind::ConflictingDeclaration:
        return "conflicting declaration";
    }
    return "unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::summary() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i)
        out << (i ? "; " : "") << to_string(violations[i].kind) << ": " << violations[i].message;
    return out.str();
}

ValidationReport validate(const UnitaryDecl& gate) {
    ValidationReport r;
    const auto d = static_cast<Index>(product(gate.arity));
    if (gate.matrix.rows() != d || gate.matrix.cols() != d) {
        r.violations.push_back({ViolationKind::DimensionMismatch,
                                "gate " + gate.name + " is " + std::to_string(gate.matrix.rows()) +
                                    "x" + std::to_string(gate.matrix.cols()) + " but arity " +
                                    dims_string(gate.arity) + " needs " + std::to_string(d)});
        return r;
    }
    const double res = linalg::max_abs(gate.matrix * gate.matrix.adjoint() - CMatrix::Identity(d, d));
    if (!(res <= tol::kUnitary))
        r.violations.push_back({ViolationKind::NonUnitaryGate,
                                "gate " + gate.name + ": |U U^dagger - I|_max = " +
                                    std::to_string(res)});
    return r;
}

ValidationReport validate(const MeasurementDecl& meas) {
    ValidationReport r;
    const auto d = static_cast<Index>(product(meas.arity));
    if (meas.outcomes.empty()) {
        r.violations.push_back(
            {ViolationKind::IncompleteMeasurement, "measurement " + meas.name + " has no outcomes"});
        return r;
    }
    std::set<int> labels;
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto& o : meas.outcomes) {
        if (!labels.insert(o.label).second)
            r.violations.push_back({ViolationKind::IncompleteMeasurement,
                                    "measurement " + meas.name + " repeats outcome " +
                                        std::to_string(o.label)});
        if (o.op.rows() != d || o.op.cols() != d) {
            r.violations.push_back({ViolationKind::DimensionMismatch,
                                    "measurement " + meas.name + " outcome " +
                                        std::to_string(o.label) + " is not " + std::to_string(d) +
                                        "x" + std::to_string(d)});
            return r;
        }
        sum += o.op.adjoint() * o.op;
    }
    const double res = linalg::max_abs(sum - CMatrix::Identity(d, d));
    if (!(res <= tol::kComplete))
        r.violations.push_back({ViolationKind::IncompleteMeasurement,
                                "incomplete measurement " + meas.name +
                                    ": |sum M^dagger M - I|_max = " + std::to_string(res)});
    return r;
}

namespace {

class Validator {
public:
    explicit Validator(const Layout& layout) : layout_(layout) {}

    void visit(const Program& p) {
        std::visit([&](const auto& n) { check(n); }, p.node().v);
    }

    ValidationReport report;

private:
    void add(ViolationKind k, std::string msg) { report.violations.push_back({k, std::move(msg)}); }

    void check_var(const QuantumVariable& v) {
        const auto* decl = layout_.find(v.name);
        if (!decl)
            add(ViolationKind::UndeclaredVariable, "variable '" + v.name + "' is not declared");
        else if (decl->dim != v.dim)
            add(ViolationKind::DimensionMismatch,
                "variable '" + v.name + "' used with dimension " + std::to_string(v.dim) +
                    " but declared " + std::to_string(decl->dim));
    }

    void check_targets(const std::vector<QuantumVariable>& targets) {
        std::unordered_set<std::string> seen;
        for (const auto& t : targets) {
            check_var(t);
            if (!seen.insert(t.name).second)
                add(ViolationKind::DuplicateTarget, "variable '" + t.name + "' targeted twice");
        }
    }

    template <class Decl>
    void check_decl(const std::shared_ptr<const Decl>& decl, const std::vector<QuantumVariable>& targets) {
        if (dims_of(targets) != decl->arity)
            add(ViolationKind::DimensionMismatch,
                decl->name + " has arity " + dims_string(decl->arity) + " but is applied to " +
                    dims_string(dims_of(targets)));
        if (!seen_.insert(decl.get()).second)
            return;
        if (!decl->builtin) {
            if (is_builtin_name(decl->name))
                add(ViolationKind::ConflictingDeclaration, "'" + decl->name + "' redeclares a built-in");
            auto [it, inserted] = by_name_.try_emplace(decl->name, decl.get());
            if (!inserted && !same(it->second, decl.get()))
                add(ViolationKind::ConflictingDeclaration,
                    "two different declarations named '" + decl->name + "'");
        }
        for (auto& v : validate(*decl).violations)
            report.violations.push_back(std::move(v));
    }

    bool same(const void* a, const void* b) const {
        if (a == b)
            return true;
        auto ua = unitaries_.find(a), ub = unitaries_.find(b);
        if (ua != unitaries_.end() && ub != unitaries_.end())
            return same_decl(*ua->second, *ub->second);
        auto ma = measurements_.find(a), mb = measurements_.find(b);
        if (ma != measurements_.end() && mb != measurements_.end())
            return same_decl(*ma->second, *mb->second);
        return false;
    }

    void check(const ast::Skip&) {}
    void check(const ast::Init& n) { check_var(n.var); }
    void check(const ast::Unitary& n) {
        check_targets(n.targets);
        unitaries_.emplace(n.gate.get(), n.gate.get());
        check_decl(n.gate, n.targets);
    }
    void check(const ast::Seq& n) {
        visit(n.first);
        visit(n.second);
    }
    void check(const ast::Case& n) {
        check_targets(n.targets);
        measurements_.emplace(n.meas.get(), n.meas.get());
        check_decl(n.meas, n.targets);
        for (const auto& o : n.meas->outcomes)
            if (!n.branches.count(o.label))
                add(ViolationKind::CaseBranchMismatch,
                    "missing branch for outcome " + std::to_string(o.label));
        for (const auto& [label, branch] : n.branches) {
            if (!n.meas->outcome(label))
                add(ViolationKind::CaseBranchMismatch,
                    "branch for outcome " + std::to_string(label) + " which " + n.meas->name +
                        " does not have");
            visit(branch);
        }
    }
    void check(const ast::While& n) {
        check_targets(n.targets);
        measurements_.emplace(n.meas.get(), n.meas.get());
        check_decl(n.meas, n.targets);
        std::set<int> labels;
        for (const auto& o : n.meas->outcomes)
            labels.insert(o.label);
        if (labels != std::set<int>{0, 1})
            add(ViolationKind::BadWhileGuardLabels,
                "while guard " + n.meas->name + " must have exactly the outcomes {0, 1}");
        visit(n.body);
    }

    const Layout& layout_;
    std::unordered_set<const void*> seen_;
    std::unordered_map<std::string, const void*> by_name_;
    std::unordered_map<const void*, const UnitaryDecl*> unitaries_;
    std::unordered_map<const void*, const MeasurementDecl*> measurements_;
};

}  // namespace

ValidationReport validate(const Program& program, const Layout& layout) {
    Validator v(layout);
    v.visit(program);
    return std::move(v.report);
}

// ---------------------------------------------------------------------------
// Queries

namespace {

template <class F>
void walk(const Program& p, F&& f) {
    f(p);
    if (p.is<ast::Seq>()) {
        walk(p.as<ast::Seq>().first, f);
        walk(p.as<ast::Seq>().second, f);
    } else if (p.is<ast::Case>()) {
        for (const auto& [label, b] : p.as<ast::Case>().branches)
            walk(b, f);
    } else if (p.is<ast::While>()) {
        walk(p.as<ast::While>().body, f);
    }
}

}  // namespace

std::vector<QuantumVariable> variables(const Program& program) {
    std::vector<QuantumVariable> out;
    auto add = [&](const QuantumVariable& v) {
        if (std::none_of(out.begin(), out.end(), [&](const auto& o) { return o.name == v.name; }))
            out.push_back(v);
    };
    walk(program, [&](const Program& p) {
        if (p.is<ast::Init>())
            add(p.as<ast::Init>().var);
        else if (p.is<ast::Unitary>())
            for (const auto& t : p.as<ast::Unitary>().targets)
                add(t);
        else if (p.is<ast::Case>())
            for (const auto& t : p.as<ast::Case>().targets)
                add(t);
        else if (p.is<ast::While>())
            for (const auto& t : p.as<ast::While>().targets)
                add(t);
    });
    return out;
}

std::size_t total_dimension(const Program& program) {
    return product_dim(variables(program));
}

std::vector<UnitaryRef> gates(const Program& program) {
    std::vector<UnitaryRef> out;
    walk(program, [&](const Program& p) {
        if (!p.is<ast::Unitary>())
            return;
        const auto& g = p.as<ast::Unitary>().gate;
        if (std::none_of(out.begin(), out.end(), [&](const auto& o) { return o->name == g->name; }))
            out.push_back(g);
    });
    return out;
}

std::vector<MeasurementRef> measurements(const Program& program) {
    std::vector<MeasurementRef> out;
    auto add = [&](const MeasurementRef& m) {
        if (std::none_of(out.begin(), out.end(), [&](const auto& o) { return o->name == m->name; }))
            out.push_back(m);
    };
    walk(program, [&](const Program& p) {
        if (p.is<ast::Case>())
            add(p.as<ast::Case>().meas);
        else if (p.is<ast::While>())
            add(p.as<ast::While>().meas);
    });
    return out;
}

}  // namespace qert
