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

#include <iosfwd>
#include <string>
#include <string_view>

#include "qert/layout.hpp"
#include "qert/runtime.hpp"
#include "qert/walk.hpp"

namespace qert::cli {

// Entry point shared by the qert binary and the tests. Writes JSON results to
// `out` and diagnostics to `err`; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// |0>, |1>, |+>, |-> on a single qubit; one digit per variable such as |01>
// (or the plain index when there is a single variable); L,k and R,k on a
// coin (dim 2) plus position layout.
CVector parse_ket(std::string_view ket, const Layout& layout);

// "a,b" with complex literals; a norm within 1e-6 of one is renormalized.
walk::CoinSpec parse_coin(std::string_view text);

// 64-bit FNV-1a, as "fnv1a64:<16 hex digits>".
std::string source_hash(std::string_view text);

// Reads QERT_EPS_SPEC when set.
AnalysisOptions options_from_environment();

}  // namespace qert::cli
