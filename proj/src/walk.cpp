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

#include "qert/walk.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "qert/linalg.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace qert::walk {

namespace {

std::size_t mod(long x, std::size_t n) {
    const long m = static_cast<long>(n);
    return static_cast<std::size_t>(((x % m) + m) % m);
}

double parity_sign(long j, long k) {
    return ((j - k) / 2) % 2 == 0 ? 1.0 : -1.0;
}

void check_size(std::size_t n) {
    if (n < 2)
        throw Error("walk: circle size must be at least 2");
}

double real_part_checked(Complex z, const char* what) {
    if (z.imag() != 0.0)
        throw Error(std::string(what) + ": coin must be real");
    return z.real();
}

}  // namespace

CoinSpec::CoinSpec(Complex a, Complex b, double tol) : a_(a), b_(b) {
    const double norm = std::norm(a) + std::norm(b);
    if (!(std::abs(norm - 1.0) <= tol))
        throw Error("coin is not normalized: |a|^2 + |b|^2 = " + std::to_string(norm));
}

CoinSpec CoinSpec::hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    return CoinSpec(s, s);
}

CMatrix CoinSpec::matrix() const {
    CMatrix t(2, 2);
    t << a_, b_, std::conj(b_), -std::conj(a_);
    return t;
}

Index basis_index(Side side, std::size_t k, std::size_t n) {
    if (k >= n)
        throw Error("walk: position " + std::to_string(k) + " is outside the circle");
    return static_cast<Index>(static_cast<std::size_t>(side) * n + k);
}

CMatrix shift_matrix(std::size_t n) {
    check_size(n);
    const auto d = static_cast<Index>(2 * n);
    CMatrix s = CMatrix::Zero(d, d);
    for (std::size_t k = 0; k < n; ++k) {
        s(basis_index(Side::L, mod(static_cast<long>(k) - 1, n), n), basis_index(Side::L, k, n)) = 1.0;
        s(basis_index(Side::R, mod(static_cast<long>(k) + 1, n), n), basis_index(Side::R, k, n)) = 1.0;
    }
    return s;
}

CMatrix step_operator(const WalkSpec& spec) {
    const std::size_t n = spec.n;
    check_size(n);
    const auto d = static_cast<Index>(2 * n);
    const CMatrix t = spec.coin.matrix();
    CMatrix tl = CMatrix::Zero(d, d);  // T (x) I
    for (Index c = 0; c < 2; ++c)
        for (Index c2 = 0; c2 < 2; ++c2)
            for (std::size_t k = 0; k < n; ++k)
                tl(c * static_cast<Index>(n) + static_cast<Index>(k),
                   c2 * static_cast<Index>(n) + static_cast<Index>(k)) = t(c, c2);
    CMatrix m1 = CMatrix::Identity(d, d);
    m1(basis_index(Side::L, 0, n), basis_index(Side::L, 0, n)) = 0.0;
    m1(basis_index(Side::R, 0, n), basis_index(Side::R, 0, n)) = 0.0;
    return m1.adjoint() * tl.adjoint() * shift_matrix(n).adjoint();
}

CMatrix QnMatrix::a() const {
    const auto m = static_cast<Index>(n);
    return q.topLeftCorner(m, m);
}

CMatrix QnMatrix::b() const {
    const auto m = static_cast<Index>(n);
    return q.bottomLeftCorner(m, m);
}

CMatrix QnMatrix::c() const {
    const auto m = static_cast<Index>(n);
    return q.bottomRightCorner(m, m);
}

// ---------------------------------------------------------------------------
// Corpus programs

ProgramUnit build_geo() {
    const QuantumVariable q{"q", 2};
    auto h = builtin_gate("H", {2});
    auto m = builtin_measurement("std", {2});
    Program body = Program::unitary(h, {q});
    return {Program::loop(m, {q}, body), Layout({q})};
}

ProgramUnit build_qbf(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw Error("build_qbf: p must lie in [0, 1]");
    const QuantumVariable q1{"q1", 2};
    const QuantumVariable q2{"q2", 2};
    const double sp = std::sqrt(p);
    const double sq = std::sqrt(1.0 - p);
    CMatrix up(2, 2);
    up << sp, -sq, sq, sp;
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix u(4, 4);
    u << s, 0, 0, -s,
         s, 0, 0, s,
         0, s, s, 0,
         0, s, -s, 0;
    auto gate_up = std::make_shared<const UnitaryDecl>(UnitaryDecl{"Up", up, {2}, false});
    auto gate_u = std::make_shared<const UnitaryDecl>(UnitaryDecl{"U", u, {2, 2}, false});
    auto x = builtin_gate("X", {2});
    auto m = builtin_measurement("std", {2});

    auto set_one = [&](const QuantumVariable& v) {
        return Program::seq(Program::init(v), Program::unitary(x, {v}));
    };
    auto set_p = [&](const QuantumVariable& v) {
        return Program::seq(Program::init(v), Program::unitary(gate_up, {v}));
    };
    Program body = Program::seq({set_p(q1), set_p(q2), Program::unitary(gate_u, {q1, q2})});
    Program prog = Program::seq({set_one(q1), set_one(q2), Program::loop(m, {q2}, body)});
    return {prog, Layout({q1, q2})};
}

ProgramUnit build_walk(const WalkSpec& spec) {
    const std::size_t n = spec.n;
    check_size(n);
    const QuantumVariable q{"q", 2};
    const QuantumVariable p{"p", n};
    auto t = std::make_shared<const UnitaryDecl>(UnitaryDecl{"T", spec.coin.matrix(), {2}, false});
    auto s = std::make_shared<const UnitaryDecl>(UnitaryDecl{"S", shift_matrix(n), {2, n}, false});
    const auto d = static_cast<Index>(n);
    CMatrix m0 = CMatrix::Zero(d, d);
    m0(0, 0) = 1.0;
    CMatrix m1 = CMatrix::Identity(d, d) - m0;
    auto meas = std::make_shared<const MeasurementDecl>(
        MeasurementDecl{"N", {{0, m0}, {1, m1}}, {n}, false});
    Program body = Program::seq(Program::unitary(t, {q}), Program::unitary(s, {q, p}));
    return {Program::loop(meas, {p}, body), Layout({q, p})};
}

ProgramUnit build_divergent() {
    const QuantumVariable q{"q", 2};
    return {Program::loop(builtin_measurement("std", {2}), {q}, Program::skip()), Layout({q})};
}

std::vector<CorpusEntry> corpus() {
    std::vector<CorpusEntry> out;
    out.push_back({"geo.qw", "geometric coin: repeat a Hadamard until the qubit reads 0", build_geo(),
                   {{"|1>", "ert", 5.0}, {"|0>", "ert", 1.0}}});
    out.push_back({"div.qw", "skip loop that never exits from |1>", build_divergent(),
                   {{"|1>", "ert", std::nullopt}, {"|0>", "ert", 1.0}}});
    for (int i = 1; i <= 9; ++i) {
        const double p = i / 10.0;
        char name[32];
        std::snprintf(name, sizeof(name), "qbf_p0.%d.qw", i);
        out.push_back({name, "quantum Bernoulli factory, p = 0." + std::to_string(i), build_qbf(p),
                       {{"mixed", "ert", 17.0}, {"|11>", "ert", 17.0}}});
    }
    for (std::size_t n : {3, 5, 8, 10}) {
        const auto nn = static_cast<double>(n);
        // Each run of the walk measures once more than it iterates, and each
        // iteration costs two gates: ERT = 3 <Q_n> - 2.
        out.push_back({"walk_n" + std::to_string(n) + ".qw",
                       "Hadamard walk on a " + std::to_string(n) + "-circle absorbed at position 0",
                       build_walk({n, CoinSpec::hadamard()}),
                       {{"L,1", "measurements", nn},
                        {"L,1", "ert", 3.0 * nn - 2.0},
                        {"L,0", "ert", 1.0}}});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Q_n

double f_n(std::size_t n, double a, double b, long j, long k) {
    return parity_sign(j, k) * (b * b) / (a * a) * static_cast<double>(j) *
           static_cast<double>(static_cast<long>(n) - 1 - k);
}

double h_n(std::size_t n, double a, double b, long j, long k) {
    return parity_sign(j, k) * (b / a) * static_cast<double>(j + k - static_cast<long>(n));
}

QnMatrix closed_form_Q(std::size_t n, const CoinSpec& coin) {
    check_size(n);
    const double a = real_part_checked(coin.a(), "closed_form_Q");
    const double b = real_part_checked(coin.b(), "closed_form_Q");
    if (a == 0.0)
        throw Error("closed_form_Q: coin entry a must be nonzero");
    const auto m = static_cast<long>(n);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
    for (long j = 0; j < m; ++j) {
        for (long k = 0; k < m; ++k) {
            const bool even = (j - k) % 2 == 0;
            if (j == k)
                A(j, k) = f_n(n, a, b, j, j) + static_cast<double>(j) + 1.0;
            else if (j < k && even)
                A(j, k) = f_n(n, a, b, j, k);
            else if (k < j && even)
                A(j, k) = f_n(n, a, b, k, j);
            if (0 < j && j <= k && even)
                B(j, k) = h_n(n, a, b, j, k);
        }
    }
    Eigen::MatrixXd C(m, m);
    for (long j = 0; j < m; ++j)
        for (long k = 0; k < m; ++k)
            C(j, k) = A(static_cast<Index>(mod(m - j, n)), static_cast<Index>(mod(m - k, n)));
    CMatrix q(2 * m, 2 * m);
    q << A.cast<Complex>(), B.transpose().cast<Complex>(), B.cast<Complex>(), C.cast<Complex>();
    return {n, q};
}

QnMatrix numeric_Q(std::size_t n, const CoinSpec& coin) {
    const WalkSpec spec{n, coin};
    const CMatrix e = step_operator(spec);
    const Index d = e.rows();
    CMatrix lhs = CMatrix::Identity(d * d, d * d) - linalg::kron(e, e.conjugate());
    const auto nn = static_cast<lapack_int>(d * d);
    const double anorm = lhs.cwiseAbs().colwise().sum().maxCoeff();
    std::vector<lapack_int> piv(static_cast<std::size_t>(nn));
    const lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, nn, nn, lhs.data(), nn, piv.data());
    double rcond = 0.0;
    if (info == 0)
        LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', nn, lhs.data(), nn, anorm, &rcond);
    if (info != 0 || !(rcond > 1e-12))
        throw Error("numeric_Q: fixed-point system is singular; the walk does not terminate "
                    "almost surely");
    CVector sol = linalg::vec(CMatrix::Identity(d, d));
    LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', nn, 1, lhs.data(), nn, piv.data(), sol.data(), nn);
    const CMatrix q = linalg::hermitian_part(linalg::unvec(sol, d));
    const double res = linalg::max_abs(q - CMatrix::Identity(d, d) - e * q * e.adjoint());
    if (!(res < 1e-8))
        throw Error("numeric_Q: fixed-point residual " + std::to_string(res) + " too large");
    return {n, q};
}

PhaseReduction phase_reduction(const CoinSpec& coin, std::size_t n) {
    check_size(n);
    if (coin.is_real()) {
        const auto d = static_cast<Index>(2 * n);
        return {coin, CMatrix::Identity(d, d)};
    }
    const double alpha = std::arg(coin.a());
    const double beta = std::arg(coin.b());
    const auto d = static_cast<Index>(2 * n);
    CMatrix p = CMatrix::Zero(d, d);
    const Complex i(0.0, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double kk = static_cast<double>(k);
        p(basis_index(Side::L, k, n), basis_index(Side::L, k, n)) = std::exp(i * (alpha * kk + alpha - beta));
        p(basis_index(Side::R, k, n), basis_index(Side::R, k, n)) = std::exp(i * (alpha * kk));
    }
    // |a|^2 + |b|^2 is unchanged, so the input tolerance carries over.
    return {CoinSpec(std::abs(coin.a()), std::abs(coin.b()), 1e-9), p};
}

double expected_steps(const WalkSpec& spec, const std::vector<Complex>& alpha_in,
                      const std::vector<Complex>& beta_in) {
    const std::size_t n = spec.n;
    check_size(n);
    if (alpha_in.size() != n || beta_in.size() != n)
        throw Error("expected_steps: need one amplitude per position and coin side");
    double norm = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        norm += std::norm(alpha_in[k]) + std::norm(beta_in[k]);
    if (std::abs(norm - 1.0) > 1e-9)
        throw Error("expected_steps: state is not normalized");

    std::vector<Complex> alpha = alpha_in;
    std::vector<Complex> beta = beta_in;
    CoinSpec coin = spec.coin;
    if (!coin.is_real()) {
        const auto red = phase_reduction(coin, n);
        for (std::size_t k = 0; k < n; ++k) {
            alpha[k] *= red.p(basis_index(Side::L, k, n), basis_index(Side::L, k, n));
            beta[k] *= red.p(basis_index(Side::R, k, n), basis_index(Side::R, k, n));
        }
        coin = red.real_coin;
    }
    const double a = coin.a().real();
    const double b = coin.b().real();
    if (a == 0.0)
        throw Error("expected_steps: coin entry a must be nonzero");
    auto re_pair = [](Complex x, Complex y) { return 2.0 * (std::conj(x) * y).real(); };
    const auto m = static_cast<long>(n);
    auto neg = [&](long j) { return mod(m - j, n); };

    double total = 0.0;
    for (long j = 0; j < m; ++j)
        total += (f_n(n, a, b, j, j) + static_cast<double>(j) + 1.0) *
                 (std::norm(alpha[j]) + std::norm(beta[neg(j)]));
    for (long j = 1; j < m; ++j)
        total += h_n(n, a, b, j, j) * re_pair(alpha[j], beta[j]);
    for (long j = 1; j < m; ++j) {
        for (long k = j + 1; k < m; ++k) {
            if ((k - j) % 2 != 0)
                continue;
            total += f_n(n, a, b, j, k) *
                     (re_pair(alpha[j], alpha[k]) + re_pair(beta[neg(j)], beta[neg(k)]));
            total += h_n(n, a, b, j, k) * re_pair(beta[j], alpha[k]);
        }
    }
    return total;
}

FixedPointCheck verify_fixed_point(const QnMatrix& qn, const WalkSpec& spec) {
    if (qn.n != spec.n || qn.q.rows() != static_cast<Index>(2 * spec.n))
        throw Error("verify_fixed_point: matrix does not match the walk size");
    const CMatrix e = step_operator(spec);
    const Index d = e.rows();
    FixedPointCheck out;
    out.residual = linalg::max_abs(qn.q - CMatrix::Identity(d, d) - e * qn.q * e.adjoint());
    if (!spec.coin.is_real())
        return out;

    const double a = spec.coin.a().real();
    const double b = spec.coin.b().real();
    const std::size_t n = spec.n;
    const auto m = static_cast<long>(n);
    const CMatrix A = qn.a();
    const CMatrix B = qn.b();
    const CMatrix C = qn.c();
    auto at = [](const CMatrix& x, std::size_t i, std::size_t j) {
        return x(static_cast<Index>(i), static_cast<Index>(j));
    };
    double diag = 0.0;
    double off = 0.0;
    for (long j = 1; j < m; ++j) {
        const Complex rhs = 1.0 + a * a * at(A, mod(j - 1, n), mod(j - 1, n)) +
                            b * b * at(A, mod(m - (j + 1), n), mod(m - (j + 1), n));
        diag = std::max(diag, std::abs(at(A, j, j) - rhs));
        for (long k = j + 1; k < m; ++k) {
            const Complex r = a * a * at(A, mod(j - 1, n), mod(k - 1, n)) +
                              b * b * at(C, mod(j + 1, n), mod(k + 1, n)) +
                              a * b * at(B, mod(j + 1, n), mod(k - 1, n));
            off = std::max(off, std::abs(at(A, j, k) - r));
        }
    }
    out.diagonal = diag;
    out.off_diagonal = off;
    return out;
}

}  // namespace qert::walk
