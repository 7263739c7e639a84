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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qert {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Raised for contract violations: bad dimensions, invalid states, unstable
// spectra. Parse failures use dsl::ParseError instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical tolerances shared across the analyzer. Each one is the pinned
// default; AnalysisOptions lets callers override the spectral ones.
namespace tol {
inline constexpr double kUnitary = 1e-10;     // max-abs residual of U U^dagger - I
inline constexpr double kComplete = 1e-10;    // max-abs residual of sum M^dagger M - I
inline constexpr double kEpsSpec = 1e-8;      // peripheral eigenvalue band
inline constexpr double kEpsTerm = 1e-6;      // eigenvalue-1 cluster of [[S]]*(I)
inline constexpr double kAst = 1e-7;          // almost-sure termination gate
inline constexpr double kHermitian = 1e-9;
inline constexpr double kNeumannResidual = 1e-9;
}  // namespace tol

}  // namespace qert
