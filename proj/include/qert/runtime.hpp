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

#include <optional>
#include <unordered_map>

#include "qert/semantics.hpp"

namespace qert {

struct AnalysisOptions {
    double eps_spec = tol::kEpsSpec;
    double eps_term = tol::kEpsTerm;
    double tol_ast = tol::kAst;
};

struct TerminationInfo {
    Observable b;        // [[S]]*(I)
    CMatrix projector;   // onto the eigenvalue-1 eigenspace of b
    Index as_dim = 0;    // rank of projector
};

class ErtValue {
public:
    static ErtValue finite(double value);
    static ErtValue infinite() { return ErtValue(); }

    bool is_finite() const { return value_.has_value(); }
    // Throws on Infinite.
    double value() const;

    friend bool operator==(const ErtValue&, const ErtValue&) = default;

private:
    ErtValue() = default;
    std::optional<double> value_;
};

// Runtime analysis of programs over one layout. Results are memoized per AST
// node for the lifetime of the analyzer.
class Analyzer {
public:
    explicit Analyzer(Layout layout, AnalysisOptions options = {});

    const Layout& layout() const { return sem_.layout(); }
    const AnalysisOptions& options() const { return options_; }
    SemanticsContext& semantics() { return sem_; }

    const Observable& termination_operator(const Program& program);
    const TerminationInfo& termination(const Program& program);
    const Observable& ert(const Program& program);

    bool almost_surely_terminates(const Program& program, const DensityMatrix& rho);
    ErtValue expected_runtime(const Program& program, const DensityMatrix& rho);
    double runtime_bound(const Program& program);

    // P (sum_k (E_1* o [[body]]*)^k (x)) P for a while node, with P its
    // termination projector.
    CMatrix loop_series(const Program& while_node, const CMatrix& x);

private:
    template <class T>
    struct Entry {
        Program owner;
        T value;
    };

    AnalysisOptions options_;
    SemanticsContext sem_;
    std::unordered_map<const void*, Entry<TerminationInfo>> term_;
    std::unordered_map<const void*, Entry<Observable>> ert_;
};

Observable termination_operator(const Program& program, const Layout& layout,
                                const AnalysisOptions& options = {});
TerminationInfo termination_projector(const Program& program, const Layout& layout,
                                      const AnalysisOptions& options = {});
Observable ert_observable(const Program& program, const Layout& layout,
                          const AnalysisOptions& options = {});
ErtValue expected_runtime(const Program& program, const Layout& layout, const DensityMatrix& rho,
                          const AnalysisOptions& options = {});
double runtime_bound(const Program& program, const Layout& layout,
                     const AnalysisOptions& options = {});

}  // namespace qert
