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
#include <utility>

namespace sqlsim {

using cdouble = std::complex<double>;

struct PhysicalUnits {
    double hbar = 1.0;
    double mass = 1.0;
    double omega = 1.0;

    void validate() const;
};

// Symmetrized second moments of a one-dimensional state.
// corr = Re<Δq Δp> = <Δq Δp + Δp Δq>/2.  A negative corr is the definition
// of "contractive" used throughout: the position variance initially shrinks
// under free evolution.
struct Moments {
    double mean_q = 0.0;
    double var_q = 0.0;
    double mean_p = 0.0;
    double var_p = 0.0;
    double corr = 0.0;

    bool contractive() const { return corr < 0.0; }
};

// Pure 1-D Gaussian wavefunction
//
//     psi(q) = exp[ -A (q - qbar)^2 + i kbar (q - qbar) + log_norm ]
//
// with Re(A) > 0.  Every operation in this library (multiplication by a
// Gaussian factor, position shift, dilatation, free evolution) is affine on
// (A, qbar, kbar, log_norm), so Gaussian closure reduces to coefficient
// arithmetic.  States are immutable values; unnormalized states (e.g. after
// applying a reduction operator) are first-class, with the overall amplitude
// and phase tracked in log_norm.
class GaussianState {
  public:
    GaussianState(cdouble exponent, double mean_position, double mean_wavenumber, cdouble log_norm);

    cdouble exponent() const { return exponent_; }
    double mean_position() const { return mean_position_; }
    double mean_wavenumber() const { return mean_wavenumber_; }
    cdouble log_norm() const { return log_norm_; }

    // Amplitude psi(q).
    cdouble amplitude(double q) const;
    // log psi(q); safe for points far in the tail where amplitude underflows.
    cdouble log_amplitude(double q) const;

    double squared_norm() const;
    // log of squared_norm(); safe where the norm itself would over/underflow.
    double log_squared_norm() const;
    bool is_normalized(double tol = 1e-12) const;
    GaussianState normalized() const;

  private:
    cdouble exponent_;       // A
    double mean_position_;   // qbar
    double mean_wavenumber_; // kbar
    cdouble log_norm_;
};

// Minimum uncertainty wave-packet: Var(q) = delta_sq, corr = 0, mean position
// q0, mean momentum hbar*k0.  Saturates Heisenberg.
GaussianState make_muw(double q0, double k0, double delta_sq, const PhysicalUnits& units = {});

// Twisted coherent state |mu nu alpha omega>, |mu|^2 - |nu|^2 = 1:
//   Var(q) = (hbar/2 m omega)|mu - nu|^2,  corr = -hbar * Im(mu* nu),
//   alpha = q0 + i p0 (mean position / mean momentum).
// Contractive when Im(mu* nu) > 0.
GaussianState make_tcs(cdouble mu, cdouble nu, cdouble alpha, const PhysicalUnits& units = {});

// Convenience: the canonical contractive family mu = cosh r, nu = i sinh r,
// chosen so that Im(mu* nu) = xi (r = asinh(2 xi)/2), centered at alpha.
GaussianState make_tcs_with_xi(double xi, cdouble alpha = 0.0, const PhysicalUnits& units = {});

Moments moments(const GaussianState& s, const PhysicalUnits& units = {});

// Free-particle evolution by time t (t < 0 runs the evolution backwards).
// Means follow mean_q -> mean_q + mean_p t/m; second moments obey
//   Var(q,t) = Var(q,0) + 2 corr t/m + Var(p,0) (t/m)^2,
// with Var(p) and the norm unchanged.
GaussianState free_evolve(const GaussianState& s, double t, const PhysicalUnits& units = {});

// Var(q,t) in closed form, without evolving the state.
double variance_curve(const GaussianState& s, double t, const PhysicalUnits& units = {});

// Vertex of the variance parabola: time of minimal Var(q) and its value.
// For corr >= 0 the minimum is at t = 0.
std::pair<double, double> min_variance_point(const GaussianState& s, const PhysicalUnits& units = {});

// Multiply by exp[-fq q^2 + fl q + fc].  The result is generally
// unnormalized; throws if the product is no longer normalizable.
GaussianState multiply_gaussian_factor(const GaussianState& s, cdouble factor_quadratic, cdouble factor_linear,
                                       cdouble factor_const);

// psi(q) -> psi(q - dq): mean position moves by +dq, central moments fixed.
GaussianState shift_position(const GaussianState& s, double dq);

// Unitary dilatation psi(q) -> sqrt(lambda) psi(lambda q), lambda > 0:
// Var(q) -> Var(q)/lambda^2, Var(p) -> lambda^2 Var(p), corr unchanged.
GaussianState dilate(const GaussianState& s, double lambda);

// <a|b> by the closed-form Gaussian integral.
cdouble overlap(const GaussianState& a, const GaussianState& b);

// Standard quantum limit value hbar * t_f / m.
double sql_value(double t_f, const PhysicalUnits& units = {});

}  // namespace sqlsim
