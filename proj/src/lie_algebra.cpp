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

#include "sqlsim/lie_algebra.hpp"

#include <cmath>
#include <stdexcept>

namespace sqlsim {

namespace {

// cosh(K) and sinh(K)/K for K = sqrt(k2), with k2 of either sign:
// for k2 < 0 these are cos(|K|) and sin(|K|)/|K|.  The K -> 0 limit is
// handled by a series valid on both branches.
struct HyperbolicPair {
    double cosh_k;
    double sinhc_k;
};

HyperbolicPair hyperbolic_pair(double k2) {
    if (std::abs(k2) < 1e-8) {
        const double c = 1.0 + k2 / 2.0 * (1.0 + k2 / 12.0 * (1.0 + k2 / 30.0));
        const double s = 1.0 + k2 / 6.0 * (1.0 + k2 / 20.0 * (1.0 + k2 / 42.0));
        return {c, s};
    }
    if (k2 > 0.0) {
        const double w = std::sqrt(k2);
        return {std::cosh(w), std::sinh(w) / w};
    }
    const double w = std::sqrt(-k2);
    return {std::cos(w), std::sin(w) / w};
}

}  // namespace

bool AbcdMatrix::plausible(double tol) const {
    return std::abs(a - std::complex<double>(1.0)) <= tol && std::abs(c - std::complex<double>(1.0)) <= tol;
}

AbcdMatrix abcd_from_hamiltonian(const HamiltonianParams& p) {
    const double k2 = p.k_z * p.k_z + p.k_plus * p.k_minus;
    const auto [ch, sc] = hyperbolic_pair(k2);
    AbcdMatrix m;
    m.a = ch + p.k_z * sc;
    m.b = -p.k_plus * sc;
    m.c = -p.k_minus * sc;
    m.d = ch - p.k_z * sc;
    return m;
}

AbcdMatrix abcd_from_three_step(const ThreeStepParams& p) {
    const double ez = std::exp(p.zeta_z);
    const double emz = std::exp(-p.zeta_z);
    AbcdMatrix m;
    m.a = (1.0 + p.zeta_plus * p.zeta_minus) * ez;
    m.b = -p.zeta_plus * emz;
    m.c = -p.zeta_minus * ez;
    m.d = emz;
    return m;
}

AbcdMatrix abcd_from_gl_form(const GlFormParams& p) {
    if (p.s == 0.0) throw std::invalid_argument("abcd_from_gl_form: s must be nonzero");
    const double theta = 0.5 * std::numbers::pi * p.g2;
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    AbcdMatrix m;
    m.a = ct + p.g1 * p.s * st;
    m.b = -st / p.s + p.g1 * ct;
    m.c = p.s * st;
    m.d = ct;
    return m;
}

ThreeStepParams breaching_three_step(double zeta_z) {
    if (!(zeta_z > 0.0))
        throw std::invalid_argument("breaching_three_step: zeta_z must be positive "
                                    "(the three-step family only realizes 0 < d < 1)");
    ThreeStepParams p;
    p.zeta_z = zeta_z;
    p.zeta_plus = std::expm1(zeta_z);
    p.zeta_minus = -std::exp(-zeta_z);
    return p;
}

HamiltonianParams hamiltonian_from_zeta(double zeta_z) {
    if (!(zeta_z > 0.0))
        throw std::invalid_argument("hamiltonian_from_zeta: zeta_z must be positive "
                                    "(the three-step family only realizes 0 < d < 1)");
    const double d = std::exp(-zeta_z);
    // K is pure imaginary here: cos|K| = (1+d)/2 lies in (1/2, 1), so the
    // principal arcsin branch is the correct one for the whole family.
    const double ratio = (d + 3.0) / (d - 1.0);  // negative
    const double abs_k = std::asin(0.5 * (1.0 - d) * std::sqrt(-ratio));
    HamiltonianParams p;
    p.k_z = std::sqrt(-1.0 / ratio) * abs_k;
    p.k_plus = 2.0 * p.k_z;
    p.k_minus = 2.0 * p.k_z / (d - 1.0);
    return p;
}

OncCheck onc_satisfied(const AbcdMatrix& m, double tol) {
    OncCheck check;
    check.applicable = m.plausible(tol);
    check.satisfied = check.applicable && std::abs(m.d) < 1.0;
    return check;
}

}  // namespace sqlsim
