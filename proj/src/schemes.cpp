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

#include "sqlsim/schemes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqlsim {

namespace {

constexpr double kPi = std::numbers::pi;

void validate_probe(const GaussianState& probe, const char* who) {
    if (!probe.is_normalized(1e-9))
        throw std::invalid_argument(std::string(who) + ": probe state must be normalized");
    if (std::abs(probe.mean_position()) > 1e-12 || std::abs(probe.mean_wavenumber()) > 1e-12)
        throw std::invalid_argument(std::string(who) +
                                    ": probe must be centered and even (<Q> = 0, zero mean wavenumber)");
}

void validate_rp(const RadiationPressureParams& p, const char* who) {
    if (!(p.alpha_mag > 0.0)) throw std::invalid_argument(std::string(who) + ": alpha_mag must be positive");
    if (!(p.l_tau > 0.0)) throw std::invalid_argument(std::string(who) + ": l_tau must be positive");
    if (!std::isfinite(p.squeeze_r) || !std::isfinite(p.feedback_gain) || !std::isfinite(p.presqueeze))
        throw std::invalid_argument(std::string(who) + ": parameters must be finite");
}

ThreeStepParams as_three_step(const SchemeDescriptor& scheme) {
    if (const auto* vn = std::get_if<VonNeumannScheme>(&scheme)) {
        (void)vn;
        return ThreeStepParams{0.0, -1.0, 0.0};
    }
    return std::get<ThreeStepScheme>(scheme).params;
}

const GaussianState& probe_of(const SchemeDescriptor& scheme) {
    if (const auto* vn = std::get_if<VonNeumannScheme>(&scheme)) return vn->probe;
    return std::get<ThreeStepScheme>(scheme).probe;
}

// Multiplicative part of the three-step Omega(x): the probe wavefunction
// evaluated at e^{zeta_z} x + zeta_minus e^{2 zeta_z} q, as a Gaussian factor
// in q.
ReductionFactors three_step_factors(const ThreeStepParams& zeta, const GaussianState& probe, double x) {
    const double ez = std::exp(zeta.zeta_z);
    const double ez2 = std::exp(2.0 * zeta.zeta_z);
    const cdouble ap = probe.exponent();
    ReductionFactors f;
    f.factor_quadratic = ap * (zeta.zeta_minus * ez2) * (zeta.zeta_minus * ez2);
    f.factor_linear = -2.0 * ap * zeta.zeta_minus * ez2 * ez * x;
    f.factor_const = -ap * ez2 * x * x + probe.log_norm();
    if (zeta.zeta_z != 0.0) {
        // exp(-i zeta_z q p / hbar): psi(q) -> psi(e^{-zeta_z} q).  The
        // unitary dilate carries sqrt(lambda); the remaining e^{zeta_z/2} is
        // the Jacobian of the non-unitary exponential.
        f.post_dilate = DilateStep{std::exp(-zeta.zeta_z), 0.5 * zeta.zeta_z};
    }
    f.post_shift = -zeta.zeta_plus * x;
    return f;
}

// Multiplicative part of the small-q radiation-pressure Omega(X) as a
// Gaussian factor in q (q_scaled = q / l_tau), squeezed probe |-i|alpha|, -r>.
ReductionFactors rp_small_q_factors(const RadiationPressureParams& p, double x) {
    const double a2 = p.alpha_mag * p.alpha_mag;
    const double e2r = std::exp(2.0 * p.squeeze_r);
    ReductionFactors f;
    if (p.presqueeze != 0.0) f.pre_dilate = DilateStep{std::exp(-p.presqueeze), 0.0};
    f.factor_quadratic = a2 / (p.l_tau * p.l_tau) * cdouble(e2r, -x);
    f.factor_linear = cdouble(2.0 * a2 * e2r * x, a2 + 0.5 * (e2r - 1.0)) / p.l_tau;
    f.factor_const = cdouble(-a2 * e2r * x * x + 0.25 * std::log(2.0 * a2 * e2r / kPi), -2.0 * a2 * x);
    f.post_shift = -p.feedback_gain * p.alpha_mag * p.l_tau * x;
    return f;
}

// Exact radiation-pressure multiplier, coherent probe:
// Omega(X; q) = (2 a^2/pi)^{1/4} exp[-a^2 (X + i e^{i u})^2 - a^2 (1 + e^{2iu})/2],
// u = q / l_tau.
cdouble rp_full_coherent(const RadiationPressureParams& p, double x, double q) {
    const double a2 = p.alpha_mag * p.alpha_mag;
    const double u = q / p.l_tau;
    const cdouble eiu = std::exp(cdouble(0.0, u));
    const cdouble t = cdouble(x, 0.0) + cdouble(0.0, 1.0) * eiu;
    const cdouble expo = -a2 * t * t - 0.5 * a2 * (1.0 + eiu * eiu);
    return std::pow(2.0 * a2 / kPi, 0.25) * std::exp(expo);
}

// Exact radiation-pressure multiplier, squeezed probe.  The singular-looking
// cot(u) (1/(k^2 e^{2r}) - 1) term is rewritten with the identity
// 1 - k^2 e^{2r} = -(e^{4r} - 1) sin^2 u, which removes the u -> 0 pole.
cdouble rp_full_squeezed(const RadiationPressureParams& p, double x, double q) {
    const double a2 = p.alpha_mag * p.alpha_mag;
    const double u = q / p.l_tau;
    const double e2r = std::exp(2.0 * p.squeeze_r);
    const double su = std::sin(u);
    const double cu = std::cos(u);
    const double ksq = e2r * su * su + cu * cu / e2r;
    const double phi = -std::atan2(e2r * su, cu);
    const double cot_term = -(e2r * e2r - 1.0) * su * cu / (ksq * e2r);
    const cdouble bracket = cdouble(1.0 / ksq, cot_term);
    const double dx = x - su;
    cdouble expo = cdouble(0.0, -0.5 * (phi + u));
    expo += cdouble(0.0, -a2 * cu * (2.0 * x - su));
    expo += -a2 * dx * dx * bracket;
    return std::pow(2.0 * a2 / (kPi * ksq), 0.25) * std::exp(expo);
}

cdouble rp_full_multiplier(const RadiationPressureParams& p, double x, double q) {
    return p.squeeze_r == 0.0 ? rp_full_coherent(p, x, q) : rp_full_squeezed(p, x, q);
}

}  // namespace

GaussianState ReductionFactors::apply(const GaussianState& s) const {
    GaussianState out = s;
    if (pre_dilate) {
        out = dilate(out, pre_dilate->lambda);
        if (pre_dilate->extra_log_amp != 0.0)
            out = multiply_gaussian_factor(out, 0.0, 0.0, pre_dilate->extra_log_amp);
    }
    out = multiply_gaussian_factor(out, factor_quadratic, factor_linear, factor_const);
    if (post_dilate) {
        out = dilate(out, post_dilate->lambda);
        if (post_dilate->extra_log_amp != 0.0)
            out = multiply_gaussian_factor(out, 0.0, 0.0, post_dilate->extra_log_amp);
    }
    if (post_shift != 0.0) out = shift_position(out, post_shift);
    return out;
}

void validate_scheme(const SchemeDescriptor& scheme, const PhysicalUnits& units) {
    units.validate();
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, VonNeumannScheme>) {
                validate_probe(s.probe, "VonNeumannScheme");
            } else if constexpr (std::is_same_v<T, ThreeStepScheme>) {
                validate_probe(s.probe, "ThreeStepScheme");
                if (!std::isfinite(s.params.zeta_plus) || !std::isfinite(s.params.zeta_minus) ||
                    !std::isfinite(s.params.zeta_z))
                    throw std::invalid_argument("ThreeStepScheme: parameters must be finite");
            } else if constexpr (std::is_same_v<T, GordonLouisellScheme>) {
                if (!s.target.is_normalized(1e-9))
                    throw std::invalid_argument("GordonLouisellScheme: target template must be normalized");
                if (std::abs(s.target.mean_position()) > 1e-12)
                    throw std::invalid_argument(
                        "GordonLouisellScheme: target template must be centered (it is recentered at the outcome)");
            } else if constexpr (std::is_same_v<T, RadiationPressureSmallQ>) {
                validate_rp(s.params, "RadiationPressureSmallQ");
            } else {
                validate_rp(s.params, "RadiationPressureFull");
            }
        },
        scheme);
}

std::string scheme_name(const SchemeDescriptor& scheme) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, VonNeumannScheme>)
                return "von_neumann";
            else if constexpr (std::is_same_v<T, ThreeStepScheme>)
                return "three_step";
            else if constexpr (std::is_same_v<T, GordonLouisellScheme>)
                return "gordon_louisell";
            else if constexpr (std::is_same_v<T, RadiationPressureSmallQ>)
                return "rp_small_q";
            else
                return "rp_full";
        },
        scheme);
}

std::optional<AbcdMatrix> scheme_abcd(const SchemeDescriptor& scheme) {
    if (std::holds_alternative<VonNeumannScheme>(scheme) || std::holds_alternative<ThreeStepScheme>(scheme))
        return abcd_from_three_step(as_three_step(scheme));
    return std::nullopt;
}

bool is_grid_backed(const SchemeDescriptor& scheme) {
    return std::holds_alternative<RadiationPressureFull>(scheme);
}

double outcome_to_position_scale(const SchemeDescriptor& scheme) {
    if (const auto* sq = std::get_if<RadiationPressureSmallQ>(&scheme))
        return sq->params.l_tau * std::exp(-sq->params.presqueeze);
    if (const auto* full = std::get_if<RadiationPressureFull>(&scheme))
        return full->params.l_tau * std::exp(-full->params.presqueeze);
    return 1.0;
}

ReductionFactors reduction_operator_description(const SchemeDescriptor& scheme, double x,
                                                const PhysicalUnits& units) {
    validate_scheme(scheme, units);
    if (std::holds_alternative<VonNeumannScheme>(scheme) || std::holds_alternative<ThreeStepScheme>(scheme))
        return three_step_factors(as_three_step(scheme), probe_of(scheme), x);
    if (const auto* sq = std::get_if<RadiationPressureSmallQ>(&scheme)) return rp_small_q_factors(sq->params, x);
    if (std::holds_alternative<GordonLouisellScheme>(scheme))
        throw std::invalid_argument("reduction_operator_description: the Gordon-Louisell reduction is not a factor "
                                    "sequence; reduce() handles it directly");
    throw std::invalid_argument("reduction_operator_description: grid-backed scheme; use grid_reduction()");
}

GridReduction grid_reduction(const SchemeDescriptor& scheme, double x, const PhysicalUnits& units) {
    validate_scheme(scheme, units);
    GridReduction g;
    if (const auto* full = std::get_if<RadiationPressureFull>(&scheme)) {
        const RadiationPressureParams p = full->params;
        if (p.presqueeze != 0.0) g.pre_dilate = DilateStep{std::exp(-p.presqueeze), 0.0};
        g.multiplier = [p, x](double q) { return rp_full_multiplier(p, x, q); };
        g.post_shift = -p.feedback_gain * p.alpha_mag * p.l_tau * x;
        return g;
    }
    if (std::holds_alternative<GordonLouisellScheme>(scheme))
        throw std::invalid_argument("grid_reduction: Gordon-Louisell posteriors are built directly from the target");
    const ReductionFactors f = reduction_operator_description(scheme, x, units);
    g.pre_dilate = f.pre_dilate;
    const cdouble fq = f.factor_quadratic, fl = f.factor_linear, fc = f.factor_const;
    g.multiplier = [fq, fl, fc](double q) { return std::exp(-fq * q * q + fl * q + fc); };
    g.post_dilate = f.post_dilate;
    g.post_shift = f.post_shift;
    return g;
}

std::optional<SchemeKernels> scheme_kernels(const SchemeDescriptor& scheme, const PhysicalUnits& units) {
    validate_scheme(scheme, units);
    if (std::holds_alternative<GordonLouisellScheme>(scheme)) return std::nullopt;

    SchemeKernels k;
    if (std::holds_alternative<VonNeumannScheme>(scheme) || std::holds_alternative<ThreeStepScheme>(scheme)) {
        const ThreeStepParams zeta = as_three_step(scheme);
        const GaussianState probe = probe_of(scheme);
        const double ez = std::exp(zeta.zeta_z);
        const double ez2 = std::exp(2.0 * zeta.zeta_z);
        const double ap_re = probe.exponent().real();
        const double log_amp2 = 2.0 * probe.log_norm().real();
        const double zm = zeta.zeta_minus;
        k.pom = [=](double x, double q) {
            const double u = ez * x + zm * ez2 * q;
            return ez * std::exp(log_amp2 - 2.0 * ap_re * u * u);
        };
        k.pull_state = ez;
        k.pull_outcome = -zeta.zeta_plus;
        k.center = [=](double q) { return -zm * ez * q; };
        k.width = std::sqrt(1.0 / (4.0 * ap_re)) / ez;
        return k;
    }

    const RadiationPressureParams p = std::holds_alternative<RadiationPressureSmallQ>(scheme)
                                          ? std::get<RadiationPressureSmallQ>(scheme).params
                                          : std::get<RadiationPressureFull>(scheme).params;
    const bool small_q = std::holds_alternative<RadiationPressureSmallQ>(scheme);
    const double a2 = p.alpha_mag * p.alpha_mag;
    const double e2r = std::exp(2.0 * p.squeeze_r);
    const double es = std::exp(p.presqueeze);
    const double l = p.l_tau;
    if (small_q) {
        k.pom = [=](double x, double q) {
            const double u = es * q / l;
            const double dx = x - u;
            return std::sqrt(2.0 * a2 * e2r / kPi) * std::exp(-2.0 * a2 * e2r * dx * dx);
        };
        k.center = [=](double q) { return es * q / l; };
        k.width = 1.0 / (2.0 * p.alpha_mag * std::exp(p.squeeze_r));
    } else {
        k.pom = [=](double x, double q) {
            const double u = es * q / l;
            const double su = std::sin(u), cu = std::cos(u);
            const double ksq = e2r * su * su + cu * cu / e2r;
            const double dx = x - su;
            return std::sqrt(2.0 * a2 / (kPi * ksq)) * std::exp(-2.0 * a2 * dx * dx / ksq);
        };
        k.center = [=](double q) { return std::sin(es * q / l); };
        // width at u = 0 (k^2 = e^{-2r}); sizing only, padded by callers
        k.width = 1.0 / (2.0 * p.alpha_mag * std::exp(p.squeeze_r));
    }
    k.pull_state = es;
    k.pull_outcome = -p.feedback_gain * p.alpha_mag * l;
    return k;
}

void require_small_q_validity(const RadiationPressureParams& p, const GaussianState& state,
                              const PhysicalUnits& units) {
    const Moments m = moments(state, units);
    const double es = std::exp(p.presqueeze);
    const double mean_u = std::abs(m.mean_q) * es / p.l_tau;
    const double std_u = std::sqrt(m.var_q) * es / p.l_tau;
    const double reach = mean_u + 3.0 * std_u;
    if (reach >= 0.1)
        throw std::domain_error("radiation-pressure small-q closed forms require |<q>|e^s/l_tau + 3 std < 0.1 "
                                "(got " +
                                std::to_string(reach) + "); use the grid-backed full variant");
}

}  // namespace sqlsim
