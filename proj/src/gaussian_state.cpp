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

#include "sqlsim/gaussian_state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqlsim {

namespace {

constexpr double kPi = std::numbers::pi;

// (A, B, C) form psi(q) = exp[-A q^2 + B q + C]; linear in every operation.
struct AbcForm {
    cdouble a, b, c;
};

AbcForm to_abc(const GaussianState& s) {
    const cdouble a = s.exponent();
    const cdouble b = 2.0 * a * s.mean_position() + cdouble(0.0, s.mean_wavenumber());
    const cdouble c = s.log_norm() - a * s.mean_position() * s.mean_position() -
                      cdouble(0.0, s.mean_wavenumber() * s.mean_position());
    return {a, b, c};
}

GaussianState from_abc(const AbcForm& f) {
    if (!(f.a.real() > 0.0)) throw std::domain_error("Gaussian state is not normalizable (Re A <= 0)");
    const double qbar = f.b.real() / (2.0 * f.a.real());
    const double kbar = f.b.imag() - 2.0 * f.a.imag() * qbar;
    const cdouble log_norm = f.c + f.a * qbar * qbar + cdouble(0.0, kbar * qbar);
    return GaussianState(f.a, qbar, kbar, log_norm);
}

}  // namespace

void PhysicalUnits::validate() const {
    if (!(hbar > 0.0) || !(mass > 0.0) || !(omega > 0.0))
        throw std::invalid_argument("PhysicalUnits: hbar, mass and omega must be strictly positive");
}

GaussianState::GaussianState(cdouble exponent, double mean_position, double mean_wavenumber, cdouble log_norm)
    : exponent_(exponent), mean_position_(mean_position), mean_wavenumber_(mean_wavenumber), log_norm_(log_norm) {
    if (!(exponent_.real() > 0.0))
        throw std::invalid_argument("GaussianState: Re(exponent) must be positive for a normalizable state");
}

cdouble GaussianState::log_amplitude(double q) const {
    const double dq = q - mean_position_;
    return -exponent_ * dq * dq + cdouble(0.0, mean_wavenumber_ * dq) + log_norm_;
}

cdouble GaussianState::amplitude(double q) const { return std::exp(log_amplitude(q)); }

double GaussianState::squared_norm() const { return std::exp(log_squared_norm()); }

double GaussianState::log_squared_norm() const {
    return 2.0 * log_norm_.real() + 0.5 * std::log(kPi / (2.0 * exponent_.real()));
}

bool GaussianState::is_normalized(double tol) const { return std::abs(squared_norm() - 1.0) <= tol; }

GaussianState GaussianState::normalized() const {
    const cdouble log_norm = log_norm_ - 0.5 * log_squared_norm();
    return GaussianState(exponent_, mean_position_, mean_wavenumber_, log_norm);
}

GaussianState make_muw(double q0, double k0, double delta_sq, const PhysicalUnits& units) {
    units.validate();
    if (!(delta_sq > 0.0)) throw std::invalid_argument("make_muw: delta_sq must be positive");
    const cdouble a(1.0 / (4.0 * delta_sq), 0.0);
    const cdouble log_norm(0.25 * std::log(1.0 / (2.0 * kPi * delta_sq)), 0.0);
    return GaussianState(a, q0, k0, log_norm);
}

GaussianState make_tcs(cdouble mu, cdouble nu, cdouble alpha, const PhysicalUnits& units) {
    units.validate();
    const double hyper = std::norm(mu) - std::norm(nu);
    if (std::abs(hyper - 1.0) > 1e-9)
        throw std::invalid_argument("make_tcs: |mu|^2 - |nu|^2 must equal 1 (got " + std::to_string(hyper) + ")");
    const double xi = std::imag(std::conj(mu) * nu);
    const double mod_diff_sq = std::norm(mu - nu);
    const cdouble a = units.mass * units.omega / (2.0 * units.hbar) * cdouble(1.0, 2.0 * xi) / mod_diff_sq;
    const double q0 = alpha.real();
    const double p0 = alpha.imag();
    const cdouble log_norm(0.25 * std::log(2.0 * a.real() / kPi), 0.0);
    return GaussianState(a, q0, p0 / units.hbar, log_norm);
}

GaussianState make_tcs_with_xi(double xi, cdouble alpha, const PhysicalUnits& units) {
    const double r = 0.5 * std::asinh(2.0 * xi);
    return make_tcs(std::cosh(r), cdouble(0.0, std::sinh(r)), alpha, units);
}

Moments moments(const GaussianState& s, const PhysicalUnits& units) {
    units.validate();
    const cdouble a = s.exponent();
    Moments m;
    m.mean_q = s.mean_position();
    m.mean_p = units.hbar * s.mean_wavenumber();
    m.var_q = 1.0 / (4.0 * a.real());
    m.corr = -units.hbar * a.imag() / (2.0 * a.real());
    m.var_p = units.hbar * units.hbar * std::norm(a) / a.real();
    return m;
}

GaussianState free_evolve(const GaussianState& s, double t, const PhysicalUnits& units) {
    units.validate();
    const AbcForm f = to_abc(s);
    // Spectral propagation in closed form: exp(-i hbar k^2 t / 2m) acting on
    // the Gaussian's Fourier transform.  lambda = 1 + 2i hbar t A / m stays in
    // the half-plane Im(lambda) != 0 for t != 0, so the principal log is safe.
    const cdouble lambda = 1.0 + cdouble(0.0, 2.0 * units.hbar * t / units.mass) * f.a;
    AbcForm g;
    g.a = f.a / lambda;
    g.b = f.b / lambda;
    g.c = f.c + f.b * f.b / (4.0 * f.a) * (1.0 - 1.0 / lambda) - 0.5 * std::log(lambda);
    return from_abc(g);
}

double variance_curve(const GaussianState& s, double t, const PhysicalUnits& units) {
    const Moments m = moments(s, units);
    const double tau = t / units.mass;
    return m.var_q + 2.0 * m.corr * tau + m.var_p * tau * tau;
}

std::pair<double, double> min_variance_point(const GaussianState& s, const PhysicalUnits& units) {
    const Moments m = moments(s, units);
    if (m.corr >= 0.0) return {0.0, m.var_q};
    const double t_min = -m.corr * units.mass / m.var_p;
    const double var_min = m.var_q - m.corr * m.corr / m.var_p;
    return {t_min, var_min};
}

GaussianState multiply_gaussian_factor(const GaussianState& s, cdouble factor_quadratic, cdouble factor_linear,
                                       cdouble factor_const) {
    AbcForm f = to_abc(s);
    f.a += factor_quadratic;
    f.b += factor_linear;
    f.c += factor_const;
    if (!(f.a.real() > 0.0))
        throw std::domain_error("multiply_gaussian_factor: product is not normalizable (Re A <= 0); "
                                "the scheme parameters are invalid for this state");
    return from_abc(f);
}

GaussianState shift_position(const GaussianState& s, double dq) {
    return GaussianState(s.exponent(), s.mean_position() + dq, s.mean_wavenumber(), s.log_norm());
}

GaussianState dilate(const GaussianState& s, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("dilate: lambda must be positive");
    const cdouble a = s.exponent() * lambda * lambda;
    const cdouble log_norm = s.log_norm() + 0.5 * std::log(lambda);
    return GaussianState(a, s.mean_position() / lambda, s.mean_wavenumber() * lambda, log_norm);
}

cdouble overlap(const GaussianState& a, const GaussianState& b) {
    const AbcForm fa = to_abc(a);
    const AbcForm fb = to_abc(b);
    const cdouble s = std::conj(fa.a) + fb.a;
    const cdouble l = std::conj(fa.b) + fb.b;
    const cdouble c = std::conj(fa.c) + fb.c;
    return std::sqrt(kPi / s) * std::exp(l * l / (4.0 * s) + c);
}

double sql_value(double t_f, const PhysicalUnits& units) {
    units.validate();
    if (!(t_f > 0.0)) throw std::invalid_argument("sql_value: t_f must be positive");
    return units.hbar * t_f / units.mass;
}

}  // namespace sqlsim
