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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "qert/oracles.hpp"
#include "qert/runtime.hpp"
#include "qert/walk.hpp"
#include "test_util.hpp"

namespace {

using namespace qert;
using testing::ket_bra;
using testing::max_abs;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(const char* f, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

const Program& last_in_seq(const Program& p) {
    const Program* cur = &p;
    while (cur->is<ast::Seq>())
        cur = &cur->as<ast::Seq>().second;
    return *cur;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome geometric_coin() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto unit = walk::build_geo();
    const DensityMatrix one(ket_bra(2, 1, 1));
    const double ert = expected_runtime(unit.program, unit.layout, one).value();
    o.require(std::abs(ert - 5.0) <= 1e-9, "ERT " + fmt("%.12g", ert));
    const auto series = oracle::ert_truncated(unit.program, unit.layout, one, 40);
    o.require(series.terms[40] >= 5.0 - 1e-6, "unfolding K=40 " + fmt("%.10g", series.terms[40]));
    const auto mc = oracle::monte_carlo_ert(unit.program, unit.layout, one, 100000, 1'000'000, 2026);
    o.require(std::abs(mc.mean_steps - 5.0) <= 3 * mc.stderr_steps,
              "Monte Carlo " + fmt("%.5f", mc.mean_steps) + " +- " + fmt("%.5f", mc.stderr_steps));
    const double t = seconds_since(t0);
    o.require(t < 1.0, "runtime " + fmt("%.3f s", t));
    if (o.pass)
        o.detail = "ERT " + fmt("%.12f", ert) + ", K=40 term " + fmt("%.9f", series.terms[40]) + ", MC " +
                   fmt("%.4f", mc.mean_steps) + " +- " + fmt("%.4f", mc.stderr_steps) + ", " + fmt("%.3f s", t);
    return o;
}

Outcome bernoulli_factory() {
    Outcome o;
    CMatrix w_expected = CMatrix::Zero(4, 4);
    w_expected.diagonal() << 1, 13, 1, 13;
    const CMatrix qbf_expected = 17.0 * CMatrix::Identity(4, 4);
    double worst_w = 0, worst_q = 0, worst_t = 0, spread = 0;
    CMatrix first;
    for (int i = 1; i <= 9; ++i) {
        const double p = 0.1 * i;
        const auto t0 = std::chrono::steady_clock::now();
        const auto unit = walk::build_qbf(p);
        Analyzer an(unit.layout);
        const CMatrix w = an.ert(last_in_seq(unit.program)).matrix();
        const CMatrix q = an.ert(unit.program).matrix();
        const double t = seconds_since(t0);
        worst_w = std::max(worst_w, max_abs(w - w_expected));
        worst_q = std::max(worst_q, max_abs(q - qbf_expected));
        worst_t = std::max(worst_t, t);
        if (i == 1)
            first = q;
        spread = std::max(spread, max_abs(q - first));
        o.require(t < 1.0, "p=" + fmt("%.1f", p) + " runtime " + fmt("%.3f s", t));
    }
    o.require(worst_w <= 1e-8, "ert[W] deviation " + fmt("%.3g", worst_w));
    o.require(worst_q <= 1e-8, "ert[QBF] deviation " + fmt("%.3g", worst_q));
    o.require(spread <= 1e-8, "p dependence " + fmt("%.3g", spread));
    if (o.pass)
        o.detail = "max |ert[W] - diag(1,13,1,13)| " + fmt("%.2g", worst_w) + ", max |ert[QBF] - 17 I| " +
                   fmt("%.2g", worst_q) + ", spread over p " + fmt("%.2g", spread) + ", slowest p " +
                   fmt("%.3f s", worst_t);
    return o;
}

Outcome walk_headline() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    for (std::size_t n = 3; n <= 20; ++n) {
        const auto q = walk::numeric_Q(n, walk::CoinSpec::hadamard());
        const Index i = walk::basis_index(walk::Side::L, 1, n);
        const double dev = std::abs(q.q(i, i) - static_cast<double>(n));
        worst = std::max(worst, dev);
        o.require(dev <= 1e-6, "n=" + std::to_string(n) + " gives " + fmt("%.10g", q.q(i, i).real()));
    }
    const double t = seconds_since(t0);
    o.require(t < 10.0, "runtime " + fmt("%.2f s", t));
    if (o.pass)
        o.detail = "n=3..20, max |<L,1|Q_n|L,1> - n| " + fmt("%.2g", worst) + ", " + fmt("%.2f s", t);
    return o;
}

Outcome closed_vs_numeric() {
    Outcome o;
    testing::Rng rng(404);
    std::vector<walk::CoinSpec> coins{walk::CoinSpec::hadamard()};
    for (int k = 0; k < 5; ++k) {
        const double th = std::uniform_real_distribution<double>(0.15, 1.42)(rng);
        coins.emplace_back(std::cos(th), (k % 2 ? -1.0 : 1.0) * std::sin(th));
    }
    double worst_f = 0, worst_res = 0;
    for (const auto& coin : coins)
        for (std::size_t n = 3; n <= 12; ++n) {
            const auto closed = walk::closed_form_Q(n, coin);
            const auto numeric = walk::numeric_Q(n, coin);
            worst_f = std::max(worst_f, (closed.q - numeric.q).norm());
            worst_res = std::max(worst_res, walk::verify_fixed_point(closed, {n, coin}).residual);
        }
    o.require(worst_f < 1e-6, "Frobenius " + fmt("%.3g", worst_f));
    o.require(worst_res < 1e-8, "fixed-point residual " + fmt("%.3g", worst_res));

    double worst_phase = 0;
    for (int k = 0; k < 5; ++k) {
        const double th = std::uniform_real_distribution<double>(0.2, 1.37)(rng);
        std::uniform_real_distribution<double> phase(-3.1, 3.1);
        const walk::CoinSpec coin(std::polar(std::cos(th), phase(rng)), std::polar(std::sin(th), phase(rng)));
        for (std::size_t n : {4u, 7u}) {
            const auto red = walk::phase_reduction(coin, n);
            const CMatrix q = walk::numeric_Q(n, coin).q;
            const CMatrix qr = walk::numeric_Q(n, red.real_coin).q;
            worst_phase = std::max(worst_phase, max_abs(red.p.adjoint() * qr * red.p - q));
        }
    }
    o.require(worst_phase <= 1e-8, "phase reduction " + fmt("%.3g", worst_phase));
    if (o.pass)
        o.detail = "6 coins x n=3..12: Frobenius " + fmt("%.2g", worst_f) + ", residual " + fmt("%.2g", worst_res) +
                   "; 5 complex coins: " + fmt("%.2g", worst_phase);
    return o;
}

Outcome divergence() {
    Outcome o;
    const auto unit = walk::build_divergent();
    Analyzer an(unit.layout);
    const DensityMatrix one(ket_bra(2, 1, 1));
    o.require(!an.expected_runtime(unit.program, one).is_finite(), "verdict is finite");
    const auto& info = an.termination(unit.program);
    o.require(max_abs(info.projector - ket_bra(2, 0, 0)) < 1e-12, "projector is not |0><0|");
    const auto mc = oracle::monte_carlo_ert(unit.program, unit.layout, one, 1000, 10000, 5);
    o.require(mc.timeouts == mc.shots, std::to_string(mc.timeouts) + " of " + std::to_string(mc.shots) +
                                           " timed out");
    if (o.pass)
        o.detail = "Infinite, projector |0><0| (rank " + std::to_string(info.as_dim) + "), " +
                   std::to_string(mc.timeouts) + "/" + std::to_string(mc.shots) + " timeouts";
    return o;
}

std::size_t statement_count(const Program& p) {
    if (p.is<ast::Seq>())
        return statement_count(p.as<ast::Seq>().first) + statement_count(p.as<ast::Seq>().second);
    if (p.is<ast::Case>()) {
        std::size_t n = 1;
        for (const auto& [_, b] : p.as<ast::Case>().branches)
            n += statement_count(b);
        return n;
    }
    if (p.is<ast::While>())
        return 1000;
    return 1;
}

Outcome properties() {
    Outcome o;
    testing::Rng rng(606);

    double vec_err = 0;
    for (int t = 0; t < 100; ++t) {
        const CMatrix a = testing::random_matrix(rng, 5, 5);
        vec_err = std::max(vec_err, max_abs(linalg::unvec(linalg::vec(a), 5) - a));
    }
    o.require(vec_err == 0.0, "vec/unvec " + fmt("%.3g", vec_err));

    double chan_err = 0, dual_err = 0;
    for (int t = 0; t < 100; ++t) {
        const Index d = 2 + t % 4;
        const auto ops = testing::random_kraus(rng, d, 1 + t % 3);
        const auto m = linalg::superop_matrix(linalg::KrausSet(ops));
        const CMatrix rho = testing::random_density(rng, d);
        chan_err = std::max(chan_err, max_abs(linalg::unvec(m.matrix() * linalg::vec(rho), d) -
                                                  testing::apply_kraus(ops, rho)));
        const CMatrix a = testing::random_hermitian(rng, d);
        const auto dual = linalg::dual_matrix(m);
        const Complex lhs = (a * m.apply(rho)).trace();
        const Complex rhs = (dual.apply(a) * rho).trace();
        dual_err = std::max(dual_err, std::abs(lhs - rhs));
    }
    o.require(chan_err <= 1e-12, "M_E vec " + fmt("%.3g", chan_err));
    o.require(dual_err <= 1e-10, "dual trace identity " + fmt("%.3g", dual_err));

    double psd = 0, lin = 0, bound_excess = -1e300;
    for (const auto& e : walk::corpus()) {
        const auto d = static_cast<Index>(e.unit.layout.total_dim());
        Analyzer an(e.unit.layout);
        const CMatrix ert = an.ert(e.unit.program).matrix();
        psd = std::min(psd, linalg::hermitian_eigensystem(linalg::hermitian_part(ert)).values(0));
        o.require(linalg::is_hermitian(ert, 1e-9), e.file + " ert not Hermitian");
        const CMatrix& proj = an.termination(e.unit.program).projector;
        const double bound = an.runtime_bound(e.unit.program);
        auto state = [&]() {
            for (;;) {
                const CVector v = proj * testing::random_state(rng, d);
                if (v.norm() > 1e-3)
                    return CMatrix(v * v.adjoint() / v.squaredNorm());
            }
        };
        for (int t = 0; t < 50; ++t) {
            const CMatrix r1 = state(), r2 = state();
            const double l1 = std::uniform_real_distribution<double>(0, 1)(rng);
            const double l2 = std::uniform_real_distribution<double>(0, 1 - l1)(rng);
            const double v1 = an.expected_runtime(e.unit.program, DensityMatrix(r1)).value();
            const double v2 = an.expected_runtime(e.unit.program, DensityMatrix(r2)).value();
            const double vm =
                an.expected_runtime(e.unit.program, DensityMatrix(CMatrix(l1 * r1 + l2 * r2))).value();
            lin = std::max(lin, std::abs(vm - l1 * v1 - l2 * v2));
            const double w = std::uniform_real_distribution<double>(0, 1)(rng);
            const double vu =
                an.expected_runtime(e.unit.program, DensityMatrix(CMatrix(w * r1 + (1 - w) * r2))).value();
            bound_excess = std::max(bound_excess, vu - bound);
        }
    }
    o.require(psd >= -1e-9, "ert min eigenvalue " + fmt("%.3g", psd));
    o.require(lin <= 1e-8, "linearity " + fmt("%.3g", lin));
    o.require(bound_excess <= 1e-7, "uniform bound exceeded by " + fmt("%.3g", bound_excess));

    const std::vector<QuantumVariable> vars{{"a", 2}, {"b", 3}};
    const Layout layout(vars);
    double path_err = 0;
    int programs = 0;
    while (programs < 100) {
        testing::ProgramGen gen(rng, vars);
        const Program p = gen.make(3);
        if (statement_count(p) > 6)
            continue;
        const CMatrix rho = testing::random_density(rng, 6);
        const auto paths = oracle::enumerate_paths(p, layout, rho, 64);
        o.require(paths.pending_paths == 0, "path enumeration left pending paths");
        path_err = std::max(path_err, max_abs(paths.terminated - qert::apply(denote(p, layout), rho)));
        ++programs;
    }
    o.require(path_err <= 1e-12, "path enumeration vs denote " + fmt("%.3g", path_err));

    if (o.pass)
        o.detail = "channels " + fmt("%.1g", chan_err) + ", dual " + fmt("%.1g", dual_err) + ", ert min eig " +
                   fmt("%.1g", psd) + ", linearity " + fmt("%.1g", lin) + ", bound excess " +
                   fmt("%.2g", bound_excess) + ", paths " + fmt("%.1g", path_err);
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"1 geometric coin", geometric_coin},
        {"2 Bernoulli factory", bernoulli_factory},
        {"3 walk headline", walk_headline},
        {"4 closed form vs numeric", closed_vs_numeric},
        {"5 divergence detection", divergence},
        {"6 property suites", properties},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s  %-26s %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    }
    std::printf("SKIP  %-26s %s\n", "7 Hadamard line",
                "infinite-dimensional walk on the line is out of scope");
    std::fflush(stdout);
    return failures == 0 ? 0 : 1;
}
