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

#include <cstdint>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "qert/program.hpp"
#include "qert/semantics.hpp"

namespace qert::oracle {

// Semantics of the program with every loop cut off after n iterations
// (further iterations abort), applied to rho through Kraus operators.
CMatrix truncated_semantics(const Program& program, const Layout& layout, const CMatrix& rho,
                            std::size_t n);

struct UnfoldingSeries {
    std::vector<double> terms;  // terms[n]: ERT with every loop unrolled n times
    bool converged = false;     // last two terms within the requested tolerance
};

UnfoldingSeries ert_truncated(const Program& program, const Layout& layout,
                              const DensityMatrix& rho, std::size_t max_unroll,
                              double tol = 1e-9);

struct RunResult {
    std::optional<std::uint64_t> steps;  // empty on timeout
    std::uint64_t measurements = 0;      // guard and case measurements performed

    bool timed_out() const { return !steps.has_value(); }
};

// Trajectory sampler for the small-step operational semantics on pure states.
class Simulator {
public:
    Simulator(Program program, Layout layout);

    RunResult run(const CVector& psi, std::mt19937_64& rng, std::uint64_t max_steps);

private:
    const std::vector<CMatrix>& ops(const Program& node);

    Program program_;
    Layout layout_;
    std::unordered_map<const void*, std::vector<CMatrix>> ops_;
    std::vector<CVector> branches_;
    std::vector<double> probs_;
};

RunResult simulate_run(const Program& program, const Layout& layout, const CVector& psi,
                       std::uint64_t seed, std::uint64_t max_steps = 1'000'000);

struct TrajectoryStats {
    std::uint64_t shots = 0;
    std::uint64_t completed = 0;
    std::uint64_t timeouts = 0;
    double mean_steps = 0.0;  // over completed shots
    double stderr_steps = 0.0;
    std::uint64_t max_steps = 0;
    std::uint64_t seed = 0;
};

// Shot generators are mt19937_64 seeded by a SplitMix64 hash of (seed, shot).
// Each shot draws an eigenvector of rho with probability lambda / tr(rho) and
// runs it on its own generator seeded from (seed, shot).
TrajectoryStats monte_carlo_ert(const Program& program, const Layout& layout,
                                const DensityMatrix& rho, std::uint64_t shots,
                                std::uint64_t max_steps = 1'000'000, std::uint64_t seed = 0);

std::mt19937_64 shot_generator(std::uint64_t seed, std::uint64_t shot);

struct PathEnumeration {
    CMatrix terminated;             // sum of states of configurations that reached termination
    double terminated_cost = 0.0;   // sum over terminated paths of cost * trace
    double pending_trace = 0.0;     // trace still held by unfinished configurations
    std::size_t terminated_paths = 0;
    std::size_t pending_paths = 0;
};

// Applies the transition rules breadth-first for at most `max_transitions`
// steps, branching on every measurement outcome.
PathEnumeration enumerate_paths(const Program& program, const Layout& layout,
                                const CMatrix& rho, std::size_t max_transitions);

}  // namespace qert::oracle
