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
#include <string>
#include <variant>
#include <vector>

#include "qert/common.hpp"
#include "qert/layout.hpp"

namespace qert {

struct UnitaryDecl {
    std::string name;
    CMatrix matrix;
    std::vector<std::size_t> arity;  // target dimensions
    bool builtin = false;
};

struct MeasurementOutcome {
    int label = 0;
    CMatrix op;
};

struct MeasurementDecl {
    std::string name;
    std::vector<MeasurementOutcome> outcomes;  // ordered by label
    std::vector<std::size_t> arity;
    bool builtin = false;

    const MeasurementOutcome* outcome(int label) const;
};

using UnitaryRef = std::shared_ptr<const UnitaryDecl>;
using MeasurementRef = std::shared_ptr<const MeasurementDecl>;

bool same_decl(const UnitaryDecl& a, const UnitaryDecl& b);
bool same_decl(const MeasurementDecl& a, const MeasurementDecl& b);

// Built-in declarations: H, X (qubit), I (any dims), std (computational basis).
UnitaryRef builtin_gate(std::string_view name, const std::vector<std::size_t>& arity);
MeasurementRef builtin_measurement(std::string_view name, const std::vector<std::size_t>& arity);
bool is_builtin_name(std::string_view name);

namespace ast {
struct Skip;
struct Init;
struct Unitary;
struct Seq;
struct Case;
struct While;
}  // namespace ast

// Immutable AST of a quantum while-program. Copies share structure.
class Program {
public:
    struct Node;

    Program();  // skip

    static Program skip();
    static Program init(QuantumVariable var);
    static Program unitary(UnitaryRef gate, std::vector<QuantumVariable> targets);
    // Sequences are kept right-nested: seq(seq(a, b), c) == seq(a, seq(b, c)).
    static Program seq(Program first, Program second);
    static Program seq(const std::vector<Program>& parts);
    static Program cases(MeasurementRef meas, std::vector<QuantumVariable> targets,
                         std::map<int, Program> branches);
    static Program loop(MeasurementRef meas, std::vector<QuantumVariable> targets, Program body);

    const Node& node() const { return *node_; }
    // Stable identity of this subtree, for per-analysis caches.
    const void* id() const { return node_.get(); }

    template <class T>
    bool is() const;
    template <class T>
    const T& as() const;

    friend bool operator==(const Program& a, const Program& b);

private:
    explicit Program(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

namespace ast {
struct Skip {};
struct Init {
    QuantumVariable var;
};
struct Unitary {
    UnitaryRef gate;
    std::vector<QuantumVariable> targets;
};
struct Seq {
    Program first;
    Program second;
};
struct Case {
    MeasurementRef meas;
    std::vector<QuantumVariable> targets;
    std::map<int, Program> branches;
};
struct While {
    MeasurementRef meas;
    std::vector<QuantumVariable> targets;
    Program body;
};
}  // namespace ast

struct Program::Node {
    std::variant<ast::Skip, ast::Init, ast::Unitary, ast::Seq, ast::Case, ast::While> v;
};

template <class T>
bool Program::is() const {
    return std::holds_alternative<T>(node_->v);
}

template <class T>
const T& Program::as() const {
    return std::get<T>(node_->v);
}

// A program together with the layout of its declared variables.
struct ProgramUnit {
    Program program;
    Layout layout;
};

enum class ViolationKind {
    NonUnitaryGate,
    IncompleteMeasurement,
    BadWhileGuardLabels,
    UndeclaredVariable,
    DimensionMismatch,
    DuplicateTarget,
    CaseBranchMismatch,
    ConflictingDeclaration,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(ViolationKind kind) const;
    std::string summary() const;
};

ValidationReport validate(const Program& program, const Layout& layout);
ValidationReport validate(const UnitaryDecl& gate);
ValidationReport validate(const MeasurementDecl& meas);

// Variables of the program in order of first appearance.
std::vector<QuantumVariable> variables(const Program& program);
std::size_t total_dimension(const Program& program);

// Every gate and measurement declaration reachable from the program, first
// appearance order, deduplicated by name.
std::vector<UnitaryRef> gates(const Program& program);
std::vector<MeasurementRef> measurements(const Program& program);

}  // namespace qert
