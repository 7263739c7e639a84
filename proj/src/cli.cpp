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

#include "qert/cli.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "qert/dsl.hpp"
#include "qert/json_io.hpp"
#include "qert/oracles.hpp"

namespace qert::cli {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::optional<std::size_t> parse_index(std::string_view s) {
    std::size_t v = 0;
    if (s.empty())
        return std::nullopt;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        return std::nullopt;
    return v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw Error("cannot write '" + path.string() + "'");
}

class Stopwatch {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

struct StateOptions {
    std::string rho_file;
    std::string pure;
    bool mixed = false;

    void attach(CLI::App& cmd) {
        auto* r = cmd.add_option("--rho", rho_file, "input density matrix as matrix JSON");
        auto* p = cmd.add_option("--pure", pure, "pure input state, e.g. \"|1>\" or \"L,1\"");
        auto* m = cmd.add_flag("--maximally-mixed", mixed, "use I/d as the input state");
        r->excludes(p)->excludes(m);
        p->excludes(m);
    }

    bool given() const { return !rho_file.empty() || !pure.empty() || mixed; }

    DensityMatrix resolve(const Layout& layout) const {
        const auto d = static_cast<Index>(layout.total_dim());
        if (!rho_file.empty()) {
            json j;
            try {
                j = json::parse(read_file(rho_file));
            } catch (const json::parse_error& e) {
                throw Error("'" + rho_file + "' is not valid JSON: " + e.what());
            }
            CMatrix m = json_io::matrix_from_json(j);
            if (m.rows() != d || m.cols() != d)
                throw Error("density matrix is " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + " but the program acts on dimension " +
                            std::to_string(d));
            return DensityMatrix(std::move(m));
        }
        if (!pure.empty())
            return DensityMatrix::pure(parse_ket(pure, layout));
        return DensityMatrix::maximally_mixed(d);
    }

    std::string describe() const {
        if (!rho_file.empty())
            return "file:" + rho_file;
        if (!pure.empty())
            return pure;
        return "maximally-mixed";
    }
};

json stats_to_json(const oracle::TrajectoryStats& st) {
    return {{"mean", st.mean_steps},     {"stderr", st.stderr_steps}, {"shots", st.shots},
            {"completed", st.completed}, {"timeouts", st.timeouts},   {"seed", st.seed},
            {"max_steps", st.max_steps}};
}

void emit(std::ostream& out, const json& j) {
    out << j.dump(2) << "\n";
}

// --- analyze -----------------------------------------------------------

struct AnalyzeArgs {
    std::string file;
    StateOptions state;
    bool oracles = false;
    std::size_t unroll = 200;
    std::uint64_t shots = 10000;
    std::uint64_t max_steps = 1'000'000;
    std::uint64_t seed = 0;
};

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out) {
    Stopwatch clock;
    const std::string source = read_file(args.file);
    const ProgramUnit unit = dsl::parse(source);
    const double t_parse = clock.lap();

    Analyzer analyzer(unit.layout, options_from_environment());
    const auto d = static_cast<Index>(unit.layout.total_dim());
    const Observable& ert = analyzer.ert(unit.program);
    const TerminationInfo& term = analyzer.termination(unit.program);

    json report;
    report["file"] = args.file;
    report["source_hash"] = source_hash(source);
    report["dimension"] = d;
    report["termination_dim"] = term.as_dim;
    report["ert_matrix"] = json_io::matrix_to_json(ert.matrix());
    report["ert_norm"] = analyzer.runtime_bound(unit.program);

    const bool everywhere = term.as_dim == d;
    report["verdict"] = everywhere ? "a.s.-terminating" : "divergent-somewhere";
    int code = 0;
    std::optional<DensityMatrix> rho;
    if (args.state.given()) {
        rho = args.state.resolve(unit.layout);
        const ErtValue value = analyzer.expected_runtime(unit.program, *rho);
        report["input"] = args.state.describe();
        report["termination_mass"] = term.b.expectation(*rho);
        report["value"] = json_io::ert_to_json(value);
        if (!value.is_finite()) {
            report["verdict"] = "divergent-on-input";
            code = 2;
        }
    }
    json timings = {{"parse_s", t_parse}, {"analysis_s", clock.lap()}};

    if (args.oracles) {
        if (!rho)
            throw Error("--oracles needs an input state");
        const auto series = oracle::ert_truncated(unit.program, unit.layout, *rho, args.unroll);
        const auto stats = oracle::monte_carlo_ert(unit.program, unit.layout, *rho, args.shots,
                                                   args.max_steps, args.seed);
        report["oracles"] = {{"unfolding",
                              {{"unroll", args.unroll},
                               {"last_term", series.terms.back()},
                               {"converged", series.converged}}},
                             {"monte_carlo", stats_to_json(stats)}};
        timings["oracles_s"] = clock.lap();
    }
    report["timings"] = timings;
    emit(out, report);
    return code;
}

// --- simulate ----------------------------------------------------------

struct SimulateArgs {
    std::string file;
    StateOptions state;
    std::uint64_t shots = 10000;
    std::uint64_t max_steps = 1'000'000;
    std::uint64_t seed = 0;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
    const ProgramUnit unit = dsl::parse(read_file(args.file));
    const DensityMatrix rho = args.state.resolve(unit.layout);
    emit(out, stats_to_json(oracle::monte_carlo_ert(unit.program, unit.layout, rho, args.shots,
                                                    args.max_steps, args.seed)));
    return 0;
}

// --- walk --------------------------------------------------------------

struct WalkArgs {
    std::size_t n = 0;
    std::string coin = "0.7071067811865476,0.7071067811865476";
    std::string mode = "both";
    std::string state;
};

double quadratic_form(const CMatrix& q, const CVector& psi) {
    return (psi.adjoint() * q * psi)(0, 0).real();
}

int cmd_walk(const WalkArgs& args, std::ostream& out) {
    if (args.n < 2)
        throw Error("--n must be at least 2");
    const walk::WalkSpec spec{args.n, parse_coin(args.coin)};
    const bool closed = args.mode == "closed" || args.mode == "both";
    const bool numeric = args.mode == "numeric" || args.mode == "both";

    std::optional<CVector> psi;
    if (!args.state.empty())
        psi = parse_ket(args.state, walk::build_walk(spec).layout);

    json report;
    report["n"] = args.n;
    report["coin"] = {{"a", json_io::complex_to_json(spec.coin.a())},
                      {"b", json_io::complex_to_json(spec.coin.b())}};
    report["mode"] = args.mode;
    if (psi)
        report["state"] = args.state;

    std::optional<CMatrix> q_closed;
    std::optional<CMatrix> q_numeric;
    if (closed) {
        json c;
        if (spec.coin.is_real()) {
            q_closed = walk::closed_form_Q(args.n, spec.coin).q;
        } else {
            const auto red = walk::phase_reduction(spec.coin, args.n);
            q_closed = red.p.adjoint() * walk::closed_form_Q(args.n, red.real_coin).q * red.p;
            c["reduced_coin"] = {{"a", red.real_coin.a().real()}, {"b", red.real_coin.b().real()}};
        }
        const auto check = walk::verify_fixed_point({args.n, *q_closed}, spec);
        c["q_matrix"] = json_io::matrix_to_json(*q_closed);
        c["fixed_point_residual"] = check.residual;
        if (check.diagonal)
            c["recurrence_residuals"] = {{"diagonal", *check.diagonal},
                                         {"off_diagonal", *check.off_diagonal}};
        if (psi) {
            std::vector<Complex> alpha(args.n), beta(args.n);
            for (std::size_t k = 0; k < args.n; ++k) {
                alpha[k] = (*psi)(walk::basis_index(walk::Side::L, k, args.n));
                beta[k] = (*psi)(walk::basis_index(walk::Side::R, k, args.n));
            }
            c["expected_steps"] = walk::expected_steps(spec, alpha, beta);
        }
        report["closed"] = c;
    }
    if (numeric) {
        json m;
        q_numeric = walk::numeric_Q(args.n, spec.coin).q;
        m["q_matrix"] = json_io::matrix_to_json(*q_numeric);
        m["fixed_point_residual"] = walk::verify_fixed_point({args.n, *q_numeric}, spec).residual;
        if (psi)
            m["expected_steps"] = quadratic_form(*q_numeric, *psi);
        report["numeric"] = m;
    }
    if (q_closed && q_numeric)
        report["discrepancy_frobenius"] = (*q_closed - *q_numeric).norm();
    emit(out, report);
    return 0;
}

// --- corpus ------------------------------------------------------------

int cmd_corpus(const std::string& dir, std::ostream& out) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Error("cannot create '" + dir + "': " + ec.message());
    json programs = json::array();
    for (const auto& entry : walk::corpus()) {
        write_file(fs::path(dir) / entry.file, dsl::pretty_print(entry.unit));
        json checks = json::array();
        for (const auto& c : entry.checks) {
            checks.push_back({{"state", c.state},
                              {"quantity", c.quantity},
                              {"expected", c.expected ? json(*c.expected) : json("infinity")}});
        }
        programs.push_back({{"file", entry.file},
                            {"description", entry.description},
                            {"dimension", entry.unit.layout.total_dim()},
                            {"checks", std::move(checks)}});
    }
    const json manifest = {{"version", 1}, {"programs", programs}};
    write_file(fs::path(dir) / "manifest.json", manifest.dump(2) + "\n");
    emit(out, {{"directory", dir}, {"files", programs.size() + 1}});
    return 0;
}

}  // namespace

CVector parse_ket(std::string_view text, const Layout& layout) {
    const std::string_view ket = trim(text);
    const auto d = static_cast<Index>(layout.total_dim());
    const auto& vars = layout.variables();
    CVector psi = CVector::Zero(d);

    if (!ket.empty() && (ket.front() == 'L' || ket.front() == 'R')) {
        const auto comma = ket.find(',');
        if (comma == std::string_view::npos || trim(ket.substr(1, comma - 1)) != "")
            throw Error("malformed walk state '" + std::string(ket) + "', expected L,k or R,k");
        if (vars.size() != 2 || vars[0].dim != 2)
            throw Error("walk states need a coin (dim 2) and a position variable");
        const auto k = parse_index(trim(ket.substr(comma + 1)));
        if (!k || *k >= vars[1].dim)
            throw Error("position in '" + std::string(ket) + "' is out of range");
        const auto side = ket.front() == 'L' ? walk::Side::L : walk::Side::R;
        psi(walk::basis_index(side, *k, vars[1].dim)) = 1.0;
        return psi;
    }
    if (ket.size() < 3 || ket.front() != '|' || ket.back() != '>')
        throw Error("malformed ket '" + std::string(ket) + "'");
    const std::string_view inner = ket.substr(1, ket.size() - 2);
    if (inner == "+" || inner == "-") {
        if (d != 2)
            throw Error("|+> and |-> need a single qubit");
        const double s = 1.0 / std::sqrt(2.0);
        psi << s, inner == "+" ? s : -s;
        return psi;
    }
    if (vars.size() == 1) {
        const auto k = parse_index(inner);
        if (!k || *k >= vars[0].dim)
            throw Error("basis state '" + std::string(ket) + "' is out of range");
        psi(static_cast<Index>(*k)) = 1.0;
        return psi;
    }
    if (inner.size() != vars.size())
        throw Error("ket '" + std::string(ket) + "' needs one digit per variable (" +
                    std::to_string(vars.size()) + ")");
    std::size_t index = 0;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const char c = inner[i];
        if (!std::isdigit(static_cast<unsigned char>(c)) ||
            static_cast<std::size_t>(c - '0') >= vars[i].dim)
            throw Error("digit " + std::to_string(i + 1) + " of '" + std::string(ket) +
                        "' is not a basis label of '" + vars[i].name + "'");
        index += static_cast<std::size_t>(c - '0') * layout.stride(i);
    }
    psi(static_cast<Index>(index)) = 1.0;
    return psi;
}

walk::CoinSpec parse_coin(std::string_view text) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos)
        throw Error("coin must be given as a,b");
    Complex a;
    Complex b;
    try {
        a = dsl::parse_complex_literal(text.substr(0, comma));
        b = dsl::parse_complex_literal(text.substr(comma + 1));
    } catch (const dsl::ParseError& e) {
        throw Error("malformed coin '" + std::string(text) + "': " + e.message());
    }
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    if (!(std::abs(norm - 1.0) <= 1e-6))
        throw Error("coin is not normalized: |a|^2 + |b|^2 = " + std::to_string(norm * norm));
    return walk::CoinSpec(a / norm, b / norm);
}

std::string source_hash(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

AnalysisOptions options_from_environment() {
    AnalysisOptions opts;
    if (const char* env = std::getenv("QERT_EPS_SPEC")) {
        const std::string_view s = trim(env);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || !(v > 0.0 && v < 1.0))
            throw Error("QERT_EPS_SPEC must be a number in (0, 1), got '" + std::string(env) + "'");
        opts.eps_spec = v;
    }
    return opts;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Expected runtime analysis of quantum while-programs"};
    app.name("qert");
    app.require_subcommand(1);

    AnalyzeArgs analyze;
    auto* a = app.add_subcommand("analyze", "compute the runtime observable and ERT of a program");
    a->add_option("file", analyze.file, ".qw source")->required();
    analyze.state.attach(*a);
    a->add_flag("--oracles", analyze.oracles, "cross-check with truncated unfolding and Monte Carlo");
    a->add_option("--unroll", analyze.unroll, "loop unrolling depth for the unfolding oracle");
    a->add_option("--shots", analyze.shots, "Monte Carlo shots")->check(CLI::PositiveNumber);
    a->add_option("--max-steps", analyze.max_steps, "step cap per shot");
    a->add_option("--seed", analyze.seed, "random seed");

    SimulateArgs simulate;
    auto* s = app.add_subcommand("simulate", "estimate the ERT by sampling executions");
    s->add_option("file", simulate.file, ".qw source")->required();
    simulate.state.attach(*s);
    s->add_option("--shots", simulate.shots, "number of runs")->check(CLI::PositiveNumber);
    s->add_option("--max-steps", simulate.max_steps, "step cap per run");
    s->add_option("--seed", simulate.seed, "random seed");

    WalkArgs walk_args;
    auto* w = app.add_subcommand("walk", "Q_n of the absorbing quantum walk on an n-circle");
    w->add_option("--n", walk_args.n, "circle size")->required();
    w->add_option("--coin", walk_args.coin, "coin entries a,b (default Hadamard)");
    w->add_option("--mode", walk_args.mode, "closed, numeric or both")
        ->check(CLI::IsMember({"closed", "numeric", "both"}));
    w->add_option("--state", walk_args.state, "start state, e.g. L,1");

    std::string emit_dir;
    auto* c = app.add_subcommand("corpus", "write the case-study programs and their expected results");
    c->add_option("--emit", emit_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    try {
        if (a->parsed())
            return cmd_analyze(analyze, out);
        if (s->parsed())
            return cmd_simulate(simulate, out);
        if (w->parsed())
            return cmd_walk(walk_args, out);
        return cmd_corpus(emit_dir, out);
    } catch (const dsl::ParseError& e) {
        err << "qert: parse error at " << e.line() << ":" << e.column() << ": " << e.message();
        if (!e.expected().empty())
            err << " (expected " << e.expected() << ")";
        err << "\n";
    } catch (const std::exception& e) {
        err << "qert: " << e.what() << "\n";
    }
    return 1;
}

}  // namespace qert::cli
