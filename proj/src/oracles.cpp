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

#include "qert/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "qert/linalg.hpp"

namespace qert::oracle {

namespace {

double trace_of(const CMatrix& m) {
    return m.trace().real();
}

CMatrix sandwich(const CMatrix& k, const CMatrix& rho) {
    return k * rho * k.adjoint();
}

// Kraus operators of a statement's first transition, lifted to the layout:
// |0><n| for init, the gate for a unitary, M_m per outcome for measurements.
std::vector<CMatrix> lifted_ops(const Program& node, const Layout& layout) {
    std::vector<CMatrix> out;
    auto measurement = [&](const MeasurementDecl& m, const std::vector<QuantumVariable>& t) {
        for (const auto& o : m.outcomes)
            out.push_back(linalg::embed(o.op, t, layout));
    };
    if (node.is<ast::Init>()) {
        const auto& var = node.as<ast::Init>().var;
        const auto d = static_cast<Index>(var.dim);
        const std::vector<QuantumVariable> t{var};
        for (Index n = 0; n < d; ++n) {
            CMatrix k = CMatrix::Zero(d, d);
            k(0, n) = 1.0;
            out.push_back(linalg::embed(k, t, layout));
        }
    } else if (node.is<ast::Unitary>()) {
        const auto& u = node.as<ast::Unitary>();
        out.push_back(linalg::embed(u.gate->matrix, u.targets, layout));
    } else if (node.is<ast::Case>()) {
        measurement(*node.as<ast::Case>().meas, node.as<ast::Case>().targets);
    } else if (node.is<ast::While>()) {
        measurement(*node.as<ast::While>().meas, node.as<ast::While>().targets);
    }
    return out;
}

int label_at(const Program& node, std::size_t i) {
    const auto& m = node.is<ast::Case>() ? *node.as<ast::Case>().meas : *node.as<ast::While>().meas;
    return m.outcomes[i].label;
}

class Unfolder {
public:
    Unfolder(const Layout& layout, std::size_t n) : layout_(layout), n_(n) {}

    struct Result {
        CMatrix state;
        double cost = 0.0;
    };

    Result eval(const Program& p, const CMatrix& rho) {
        if (p.is<ast::Skip>())
            return {rho, 0.0};
        if (p.is<ast::Init>() || p.is<ast::Unitary>()) {
            CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
            for (const auto& k : ops(p))
                out += sandwich(k, rho);
            return {std::move(out), trace_of(rho)};
        }
        if (p.is<ast::Seq>()) {
            auto a = eval(p.as<ast::Seq>().first, rho);
            auto b = eval(p.as<ast::Seq>().second, a.state);
            return {std::move(b.state), a.cost + b.cost};
        }
        const auto& k = ops(p);
        if (p.is<ast::Case>()) {
            const auto& branches = p.as<ast::Case>().branches;
            Result r{CMatrix::Zero(rho.rows(), rho.cols()), trace_of(rho)};
            for (std::size_t i = 0; i < k.size(); ++i) {
                auto b = eval(branches.at(label_at(p, i)), sandwich(k[i], rho));
                r.state += b.state;
                r.cost += b.cost;
            }
            return r;
        }
        // Guard ops are ordered by label, so k[0] is M_0 and k[1] is M_1.
        const Program& body = p.as<ast::While>().body;
        Result r{CMatrix::Zero(rho.rows(), rho.cols()), 0.0};
        CMatrix sigma = rho;
        for (std::size_t it = 0; it < n_; ++it) {
            r.cost += trace_of(sigma);
            r.state += sandwich(k[0], sigma);
            auto b = eval(body, sandwich(k[1], sigma));
            r.cost += b.cost;
            sigma = std::move(b.state);
        }
        return r;
    }

private:
    const std::vector<CMatrix>& ops(const Program& p) {
        auto it = ops_.find(p.id());
        if (it == ops_.end())
            it = ops_.emplace(p.id(), lifted_ops(p, layout_)).first;
        return it->second;
    }

    const Layout& layout_;
    std::size_t n_;
    std::unordered_map<const void*, std::vector<CMatrix>> ops_;
};

double uniform01(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Born-rule sampling of one outcome; psi is replaced by the normalized
// post-measurement state. Returns the outcome index.
std::size_t sample(const std::vector<CMatrix>& ops, CVector& psi, std::mt19937_64& rng,
                   std::vector<CVector>& branches, std::vector<double>& probs) {
    branches.resize(ops.size());
    probs.resize(ops.size());
    double total = 0.0;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        branches[i].noalias() = ops[i] * psi;
        probs[i] = branches[i].squaredNorm();
        total += probs[i];
    }
    if (!(total > 0.0))
        throw Error("simulate: state vanished under a measurement");
    double u = uniform01(rng) * total;
    std::size_t pick = probs.size() - 1;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] > 0.0 && u < probs[i]) {
            pick = i;
            break;
        }
        u -= probs[i];
    }
    while (probs[pick] <= 0.0)
        --pick;
    psi = branches[pick] / std::sqrt(probs[pick]);
    return pick;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

CMatrix truncated_semantics(const Program& program, const Layout& layout, const CMatrix& rho,
                            std::size_t n) {
    return Unfolder(layout, n).eval(program, rho).state;
}

UnfoldingSeries ert_truncated(const Program& program, const Layout& layout,
                              const DensityMatrix& rho, std::size_t max_unroll, double tol) {
    UnfoldingSeries s;
    s.terms.reserve(max_unroll + 1);
    for (std::size_t n = 0; n <= max_unroll; ++n)
        s.terms.push_back(Unfolder(layout, n).eval(program, rho.matrix()).cost);
    s.converged = s.terms.size() >= 2 && s.terms[max_unroll] - s.terms[max_unroll - 1] <= tol;
    return s;
}

// ---------------------------------------------------------------------------
// Trajectories

Simulator::Simulator(Program program, Layout layout)
    : program_(std::move(program)), layout_(std::move(layout)) {}

const std::vector<CMatrix>& Simulator::ops(const Program& node) {
    auto it = ops_.find(node.id());
    if (it == ops_.end())
        it = ops_.emplace(node.id(), lifted_ops(node, layout_)).first;
    return it->second;
}

RunResult Simulator::run(const CVector& psi0, std::mt19937_64& rng, std::uint64_t max_steps) {
    if (psi0.size() != static_cast<Index>(layout_.total_dim()))
        throw Error("simulate: state has dimension " + std::to_string(psi0.size()) +
                    " but the layout has dimension " + std::to_string(layout_.total_dim()));
    if (std::abs(psi0.norm() - 1.0) > 1e-9)
        throw Error("simulate: state is not normalized");
    CVector psi = psi0;
    RunResult r;
    std::uint64_t steps = 0;
    std::vector<const Program*> stack{&program_};
    while (!stack.empty()) {
        const Program& p = *stack.back();
        stack.pop_back();
        if (p.is<ast::Skip>())
            continue;
        if (p.is<ast::Seq>()) {
            stack.push_back(&p.as<ast::Seq>().second);
            stack.push_back(&p.as<ast::Seq>().first);
            continue;
        }
        if (steps >= max_steps)
            return r;
        ++steps;
        if (p.is<ast::Unitary>()) {
            psi = ops(p).front() * psi;
        } else if (p.is<ast::Init>()) {
            sample(ops(p), psi, rng, branches_, probs_);
        } else if (p.is<ast::Case>()) {
            ++r.measurements;
            const std::size_t i = sample(ops(p), psi, rng, branches_, probs_);
            stack.push_back(&p.as<ast::Case>().branches.at(label_at(p, i)));
        } else {
            ++r.measurements;
            if (label_at(p, sample(ops(p), psi, rng, branches_, probs_)) == 1) {
                stack.push_back(&p);
                stack.push_back(&p.as<ast::While>().body);
            }
        }
    }
    r.steps = steps;
    return r;
}

std::mt19937_64 shot_generator(std::uint64_t seed, std::uint64_t shot) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ shot));
}

RunResult simulate_run(const Program& program, const Layout& layout, const CVector& psi,
                       std::uint64_t seed, std::uint64_t max_steps) {
    Simulator sim(program, layout);
    auto rng = shot_generator(seed, 0);
    return sim.run(psi, rng, max_steps);
}

TrajectoryStats monte_carlo_ert(const Program& program, const Layout& layout,
                                const DensityMatrix& rho, std::uint64_t shots,
                                std::uint64_t max_steps, std::uint64_t seed) {
    if (shots == 0)
        throw Error("monte_carlo_ert: shots must be positive");
    if (!(rho.trace() > 0.0))
        throw Error("monte_carlo_ert: density matrix has zero trace");
    const auto eig = linalg::hermitian_eigensystem(rho.matrix());
    std::vector<double> cumulative;
    double acc = 0.0;
    for (Index i = 0; i < eig.values.size(); ++i)
        cumulative.push_back(acc += std::max(0.0, eig.values(i)));

    Simulator sim(program, layout);
    TrajectoryStats st;
    st.shots = shots;
    st.max_steps = max_steps;
    st.seed = seed;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        auto rng = shot_generator(seed, shot);
        const double u = uniform01(rng) * acc;
        const auto pick = std::min<std::size_t>(
            static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                     cumulative.begin()),
            cumulative.size() - 1);
        const CVector psi = eig.vectors.col(static_cast<Index>(pick)).normalized();
        const RunResult r = sim.run(psi, rng, max_steps);
        if (r.timed_out()) {
            ++st.timeouts;
            continue;
        }
        ++st.completed;
        const auto x = static_cast<double>(*r.steps);
        sum += x;
        sum_sq += x * x;
    }
    if (st.completed > 0) {
        const auto n = static_cast<double>(st.completed);
        st.mean_steps = sum / n;
        if (st.completed > 1) {
            const double var = std::max(0.0, (sum_sq - n * st.mean_steps * st.mean_steps) / (n - 1.0));
            st.stderr_steps = std::sqrt(var / n);
        }
    }
    return st;
}

// ---------------------------------------------------------------------------
// Path enumeration

PathEnumeration enumerate_paths(const Program& program, const Layout& layout, const CMatrix& rho,
                                std::size_t max_transitions) {
    struct Config {
        std::vector<const Program*> stack;  // continuation, top at the back
        CMatrix state;
        double cost = 0.0;
    };
    std::unordered_map<const void*, std::vector<CMatrix>> cache;
    auto ops = [&](const Program& p) -> const std::vector<CMatrix>& {
        auto it = cache.find(p.id());
        if (it == cache.end())
            it = cache.emplace(p.id(), lifted_ops(p, layout)).first;
        return it->second;
    };
    // Sequencing is not a transition of its own: S1;S2 steps as S1 does.
    auto unfold_seq = [](std::vector<const Program*>& stack) {
        while (!stack.empty() && stack.back()->is<ast::Seq>()) {
            const Program* s = stack.back();
            stack.pop_back();
            stack.push_back(&s->as<ast::Seq>().second);
            stack.push_back(&s->as<ast::Seq>().first);
        }
    };

    PathEnumeration out;
    out.terminated = CMatrix::Zero(rho.rows(), rho.cols());
    std::vector<Config> frontier{{{&program}, rho, 0.0}};
    for (std::size_t t = 0; t < max_transitions && !frontier.empty(); ++t) {
        std::vector<Config> next;
        for (auto& c : frontier) {
            unfold_seq(c.stack);
            const Program& p = *c.stack.back();
            c.stack.pop_back();
            auto emit = [&](std::vector<const Program*> stack, CMatrix state, double cost) {
                if (linalg::max_abs(state) == 0.0)
                    return;
                unfold_seq(stack);
                if (stack.empty()) {
                    out.terminated += state;
                    out.terminated_cost += cost * trace_of(state);
                    ++out.terminated_paths;
                } else {
                    next.push_back({std::move(stack), std::move(state), cost});
                }
            };
            if (p.is<ast::Skip>()) {
                emit(c.stack, c.state, c.cost);
            } else if (p.is<ast::Init>() || p.is<ast::Unitary>()) {
                CMatrix s = CMatrix::Zero(rho.rows(), rho.cols());
                for (const auto& k : ops(p))
                    s += sandwich(k, c.state);
                emit(c.stack, std::move(s), c.cost + 1.0);
            } else {
                const auto& k = ops(p);
                for (std::size_t i = 0; i < k.size(); ++i) {
                    auto stack = c.stack;
                    const int label = label_at(p, i);
                    if (p.is<ast::Case>()) {
                        stack.push_back(&p.as<ast::Case>().branches.at(label));
                    } else if (label == 1) {
                        stack.push_back(&p);
                        stack.push_back(&p.as<ast::While>().body);
                    }
                    emit(std::move(stack), sandwich(k[i], c.state), c.cost + 1.0);
                }
            }
        }
        frontier = std::move(next);
    }
    for (const auto& c : frontier)
        out.pending_trace += trace_of(c.state);
    out.pending_paths = frontier.size();
    return out;
}

}  // namespace qert::oracle
