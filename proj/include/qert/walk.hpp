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
#include <vector>

#include "qert/program.hpp"

namespace qert::walk {

// Coin T = [[a, b], [b*, -a*]] with |a|^2 + |b|^2 = 1.
class CoinSpec {
public:
    CoinSpec(Complex a, Complex b, double tol = tol::kUnitary);

    static CoinSpec hadamard();

    Complex a() const { return a_; }
    Complex b() const { return b_; }
    bool is_real() const { return a_.imag() == 0.0 && b_.imag() == 0.0; }
    CMatrix matrix() const;

private:
    Complex a_;
    Complex b_;
};

struct WalkSpec {
    std::size_t n = 2;  // circle size
    CoinSpec coin = CoinSpec::hadamard();
};

enum class Side { L = 0, R = 1 };

// Basis index of |side, k> in the coin-major layout (coin, position).
Index basis_index(Side side, std::size_t k, std::size_t n);

// S|L,k> = |L,k-1>, S|R,k> = |R,k+1>, positions mod n.
CMatrix shift_matrix(std::size_t n);

// E = M_1^dagger (T (x) I)^dagger S^dagger; Q = I + E Q E^dagger.
CMatrix step_operator(const WalkSpec& spec);

struct QnMatrix {
    std::size_t n = 0;
    CMatrix q;

    CMatrix a() const;  // L/L block
    CMatrix b() const;  // R/L block
    CMatrix c() const;  // R/R block
};

ProgramUnit build_geo();
ProgramUnit build_qbf(double p);
ProgramUnit build_walk(const WalkSpec& spec);
// while std[q] == 1 do skip od
ProgramUnit build_divergent();

double f_n(std::size_t n, double a, double b, long j, long k);
double h_n(std::size_t n, double a, double b, long j, long k);

// Closed form for a real coin with a != 0.
QnMatrix closed_form_Q(std::size_t n, const CoinSpec& coin);

// Direct solve of (I - E (x) E*) vec(Q) = vec(I).
QnMatrix numeric_Q(std::size_t n, const CoinSpec& coin);

// <Psi|Q_n|Psi> for Psi = sum_k alpha_k |L,k> + beta_k |R,k>, evaluated from
// the scalar expansion. Complex coins go through phase_reduction.
double expected_steps(const WalkSpec& spec, const std::vector<Complex>& alpha,
                      const std::vector<Complex>& beta);

struct PhaseReduction {
    CoinSpec real_coin;  // (|a|, |b|)
    CMatrix p;           // diagonal unitary with Q_n = P^dagger Q_n' P
};

PhaseReduction phase_reduction(const CoinSpec& coin, std::size_t n);

struct FixedPointCheck {
    double residual = 0.0;                 // max |Q - I - E Q E^dagger|
    std::optional<double> diagonal;        // scalar recurrence on (A_n)_{jj}, real coins
    std::optional<double> off_diagonal;    // scalar recurrence on (A_n)_{jk}, 0 < j < k < n
};

FixedPointCheck verify_fixed_point(const QnMatrix& q, const WalkSpec& spec);

struct CorpusCheck {
    std::string state;               // ket string, or "mixed" for the maximally mixed state
    std::string quantity;            // "ert", or "measurements" for <psi|Q_n|psi>
    std::optional<double> expected;  // empty means infinite
};

struct CorpusEntry {
    std::string file;
    std::string description;
    ProgramUnit unit;
    std::vector<CorpusCheck> checks;
};

// geo, div, qbf_p0.1 .. qbf_p0.9 and walk_n{3,5,8,10} with their expected results.
std::vector<CorpusEntry> corpus();

}  // namespace qert::walk
