// Copyright 2026 The sqlsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>

namespace sqlsim {

// Coupling constants of the impulsive object-probe interaction
//   H = -k_plus Q p - k_minus q P + k_z (q p - Q P).
// K^2 = k_z^2 + k_plus k_minus may be negative (K pure imaginary).
struct HamiltonianParams {
    double k_plus = 0.0;
    double k_minus = 0.0;
    double k_z = 0.0;
};

// Ordered decomposition exp(zeta_plus J+) exp(zeta_minus J-) exp(2 zeta_z Jz):
// pre-squeeze (dilatation), von Neumann qP entanglement, outcome-proportional
// position-shift feedback.
struct ThreeStepParams {
    double zeta_plus = 0.0;
    double zeta_minus = 0.0;
    double zeta_z = 0.0;
};

// Feedback-then-rotation form exp(-i g1 pQ/hbar) exp(i pi g2 (p Q / s - s q P)/(2 hbar)).
struct GlFormParams {
    double g1 = 0.0;
    double g2 = 0.0;
    double s = 1.0;
};

// The 2x2 dynamics matrix [[a, -b], [-c, d]] of the measurement interaction
// in the Pauli representation of gl(2,C).  Determinant a d - b c = 1.
struct AbcdMatrix {
    std::complex<double> a, b, c, d;

    std::complex<double> det() const { return a * d - b * c; }
    // Plausible object-probe interaction: a = c = 1 (within tol), which makes
    // the precision and posterior deviation vanish with the probe spread.
    bool plausible(double tol = 1e-9) const;
};

AbcdMatrix abcd_from_hamiltonian(const HamiltonianParams& p);
AbcdMatrix abcd_from_three_step(const ThreeStepParams& p);
AbcdMatrix abcd_from_gl_form(const GlFormParams& p);

// The one-parameter family of three-step schemes that satisfies the breaching
// constraints a = c = 1, b = d - 1 with d = exp(-zeta_z) in (0, 1):
//   zeta_minus = -exp(-zeta_z), zeta_plus = exp(zeta_z) - 1, zeta_z > 0.
// Only 0 < d < 1 is realizable this way; d <= 0 is rejected as unreachable.
ThreeStepParams breaching_three_step(double zeta_z);

// Hamiltonian couplings equivalent to breaching_three_step(zeta_z):
// k_plus = 2 k_z and -1/2 < k_z/k_minus < 0, with K pure imaginary.
HamiltonianParams hamiltonian_from_zeta(double zeta_z);

// Ozawa's necessary condition for breaching the SQL, |d| < 1, evaluated on a
// plausible matrix.  Not applicable when a = c = 1 fails.
struct OncCheck {
    bool applicable = false;
    bool satisfied = false;
};
OncCheck onc_satisfied(const AbcdMatrix& m, double tol = 1e-9);

}  // namespace sqlsim
