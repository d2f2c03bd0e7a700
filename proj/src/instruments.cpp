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

#include "sqlsim/instruments.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqlsim {

namespace {

constexpr double kPi = std::numbers::pi;

// Outcome density of a kernel-backed scheme: the readout kernel is Gaussian
// with an affine center in q, so p(x) is the Gaussian convolution
// N(center(<q>), width^2 + slope^2 Var(q)) in closed form.
OutcomeDistribution kernel_density(const SchemeDescriptor& scheme, const GaussianState& state,
                                   const PhysicalUnits& units) {
    const SchemeKernels k = *scheme_kernels(scheme, units);
    const Moments m = moments(state, units);
    const double slope = k.center(1.0) - k.center(0.0);
    return OutcomeDistribution::gaussian(k.center(m.mean_q), k.width * k.width + slope * slope * m.var_q);
}

// Probe points for the affine posterior-mean extraction: the kernel center at
// the state mean, spread by the kernel width plus the state's mapped spread.
std::pair<double, double> fit_anchor(const SchemeDescriptor& scheme, const GaussianState& state,
                                     const PhysicalUnits& units) {
    const SchemeKernels k = *scheme_kernels(scheme, units);
    const Moments m = moments(state, units);
    const double sigma = std::sqrt(m.var_q);
    const double x0 = k.center(m.mean_q);
    const double slope_spread = 0.5 * std::abs(k.center(m.mean_q + sigma) - k.center(m.mean_q - sigma));
    const double h = std::hypot(k.width, slope_spread);
    return {x0, h > 0.0 ? h : 1.0};
}

const RadiationPressureParams* rp_params_of(const SchemeDescriptor& scheme) {
    if (const auto* sq = std::get_if<RadiationPressureSmallQ>(&scheme)) return &sq->params;
    if (const auto* full = std::get_if<RadiationPressureFull>(&scheme)) return &full->params;
    return nullptr;
}

void require_plausible(const SchemeDescriptor& scheme) {
    if (const auto abcd = scheme_abcd(scheme); abcd && !abcd->plausible())
        throw std::domain_error("scheme is not a plausible (a = c = 1) interaction; the noise functionals "
                                "assume an unbiased readout");
}

Grid default_reduction_grid(const SchemeDescriptor& scheme, const GaussianState& state, double x,
                            const PhysicalUnits&) {
    // Cover prior and posterior supports: the feedback shift plus the
    // pre-squeeze expansion of the state width.
    const double sigma = std::sqrt(1.0 / (4.0 * state.exponent().real()));
    double margin = sigma;
    if (const auto* p = rp_params_of(scheme))
        margin += std::abs(p->feedback_gain * p->alpha_mag * p->l_tau * x) +
                  14.0 * sigma * std::expm1(std::abs(p->presqueeze));
    return Grid::covering(std::span<const GaussianState>(&state, 1), 14.0, 4096, margin);
}

// The posterior mean is affine in the outcome for every Gaussian-preserving
// scheme; two reductions pin it.
struct AffinePosteriorMean {
    double slope;
    double offset;
    double posterior_var;  // outcome-independent
};

AffinePosteriorMean posterior_mean_affine(const SchemeDescriptor& scheme, const GaussianState& state,
                                          double x0, double h, const PhysicalUnits& units) {
    if (const auto* gl = std::get_if<GordonLouisellScheme>(&scheme)) {
        const Moments mt = moments(gl->target, units);
        return {1.0, 0.0, mt.var_q};
    }
    const GaussianState p1 = reduction_operator_description(scheme, x0 - h, units).apply(state);
    const GaussianState p2 = reduction_operator_description(scheme, x0 + h, units).apply(state);
    AffinePosteriorMean am;
    am.slope = (p2.mean_position() - p1.mean_position()) / (2.0 * h);
    am.offset = p1.mean_position() - am.slope * (x0 - h);
    am.posterior_var = moments(p2, units).var_q;
    return am;
}

}  // namespace

OutcomeDistribution OutcomeDistribution::gaussian(double mean, double variance) {
    if (!(variance > 0.0)) throw std::invalid_argument("OutcomeDistribution: variance must be positive");
    OutcomeDistribution d;
    d.impl_ = GaussianPart{mean, variance};
    return d;
}

OutcomeDistribution OutcomeDistribution::tabulated(TabulatedDensity density) {
    OutcomeDistribution d;
    d.impl_ = std::move(density);
    return d;
}

double OutcomeDistribution::mean() const {
    if (const auto* g = std::get_if<GaussianPart>(&impl_)) return g->mean;
    return std::get<TabulatedDensity>(impl_).mean();
}

double OutcomeDistribution::variance() const {
    if (const auto* g = std::get_if<GaussianPart>(&impl_)) return g->variance;
    return std::get<TabulatedDensity>(impl_).variance();
}

double OutcomeDistribution::density(double x) const {
    if (const auto* g = std::get_if<GaussianPart>(&impl_)) {
        const double d = x - g->mean;
        return std::exp(-d * d / (2.0 * g->variance)) / std::sqrt(2.0 * kPi * g->variance);
    }
    return std::get<TabulatedDensity>(impl_).density_at(x);
}

double OutcomeDistribution::sample(RngStream& rng) const {
    if (const auto* g = std::get_if<GaussianPart>(&impl_)) return g->mean + std::sqrt(g->variance) * rng.normal();
    return std::get<TabulatedDensity>(impl_).sample(rng.uniform01());
}

const TabulatedDensity& OutcomeDistribution::table() const { return std::get<TabulatedDensity>(impl_); }

OutcomeDistribution outcome_distribution(const SchemeDescriptor& scheme, const GaussianState& state,
                                         const PhysicalUnits& units) {
    validate_scheme(scheme, units);
    if (std::holds_alternative<GordonLouisellScheme>(scheme)) {
        const Moments m = moments(state, units);
        return OutcomeDistribution::gaussian(m.mean_q, m.var_q);
    }
    if (const auto* sq = std::get_if<RadiationPressureSmallQ>(&scheme))
        require_small_q_validity(sq->params, state, units);
    if (is_grid_backed(scheme)) {
        const Grid grid = default_reduction_grid(scheme, state, 0.0, units);
        const GridState gs = discretize(state.normalized(), grid, units);
        return OutcomeDistribution::tabulated(distribution_grid(scheme, gs, units));
    }
    return kernel_density(scheme, state, units);
}

PosteriorResult reduce(const SchemeDescriptor& scheme, const GaussianState& state, double x,
                       const PhysicalUnits& units) {
    validate_scheme(scheme, units);
    if (const auto* gl = std::get_if<GordonLouisellScheme>(&scheme)) {
        const Moments m = moments(state, units);
        const double density = OutcomeDistribution::gaussian(m.mean_q, m.var_q).density(x);
        return PosteriorResult{x, shift_position(gl->target, x).normalized(), density};
    }
    if (const auto* sq = std::get_if<RadiationPressureSmallQ>(&scheme))
        require_small_q_validity(sq->params, state, units);
    if (is_grid_backed(scheme)) {
        const Grid grid = default_reduction_grid(scheme, state, x, units);
        const GridState gs = discretize(state.normalized(), grid, units);
        double weight = 0.0;
        GridState posterior = apply_reduction_grid(scheme, gs, x, units, &weight);
        return PosteriorResult{x, std::move(posterior), weight};
    }
    const GaussianState raw = reduction_operator_description(scheme, x, units).apply(state.normalized());
    const double density = raw.squared_norm();
    if (!(density > 0.0) || !std::isfinite(density))
        throw std::domain_error("reduce: outcome density vanishes at x");
    return PosteriorResult{x, raw.normalized(), density};
}

double sample_outcome(const SchemeDescriptor& scheme, const GaussianState& state, RngStream& rng,
                      const PhysicalUnits& units) {
    return outcome_distribution(scheme, state, units).sample(rng);
}

double precision(const SchemeDescriptor& scheme, const GaussianState& state, const PhysicalUnits& units) {
    validate_scheme(scheme, units);
    require_plausible(scheme);
    if (std::holds_alternative<GordonLouisellScheme>(scheme)) return 0.0;
    if (const auto* vn = std::get_if<VonNeumannScheme>(&scheme)) return moments(vn->probe, units).var_q;
    if (const auto* ts = std::get_if<ThreeStepScheme>(&scheme)) {
        const double d = abcd_from_three_step(ts->params).d.real();
        return d * d * moments(ts->probe, units).var_q;
    }
    if (const auto* sq = std::get_if<RadiationPressureSmallQ>(&scheme)) {
        require_small_q_validity(sq->params, state, units);
        const RadiationPressureParams& p = sq->params;
        return p.l_tau * p.l_tau /
               (4.0 * p.alpha_mag * p.alpha_mag * std::exp(2.0 * p.squeeze_r) * std::exp(2.0 * p.presqueeze));
    }
    const Grid grid = default_reduction_grid(scheme, state, 0.0, units);
    return grid_precision(scheme, discretize(state.normalized(), grid, units), units);
}

double posterior_deviation(const SchemeDescriptor& scheme, const GaussianState& state, const PhysicalUnits& units) {
    validate_scheme(scheme, units);
    if (const auto* gl = std::get_if<GordonLouisellScheme>(&scheme)) return moments(gl->target, units).var_q;
    if (is_grid_backed(scheme)) {
        const Grid grid = default_reduction_grid(scheme, state, 0.0, units);
        return grid_posterior_deviation(scheme, discretize(state.normalized(), grid, units), units);
    }
    if (const auto* sq = std::get_if<RadiationPressureSmallQ>(&scheme))
        require_small_q_validity(sq->params, state, units);
    const OutcomeDistribution dist = outcome_distribution(scheme, state, units);
    const auto [x0, h] = fit_anchor(scheme, state, units);
    const AffinePosteriorMean am = posterior_mean_affine(scheme, state.normalized(), x0, h, units);
    const double scale = outcome_to_position_scale(scheme);
    const double gamma = am.slope - scale;
    const double mu = dist.mean();
    const double second_moment = dist.variance() + mu * mu;
    const double bias_term = gamma * gamma * second_moment + 2.0 * gamma * am.offset * mu + am.offset * am.offset;
    return am.posterior_var + bias_term;
}

TotalUncertainty total_uncertainty(const SchemeDescriptor& scheme, const GaussianState& state,
                                   const PhysicalUnits& units) {
    validate_scheme(scheme, units);
    const OutcomeDistribution dist = outcome_distribution(scheme, state, units);
    const double scale = outcome_to_position_scale(scheme);
    TotalUncertainty tu;
    tu.value = scale * scale * dist.variance();
    const Moments m = moments(state, units);
    const double bias = std::abs(scale * dist.mean() - m.mean_q);
    tu.biased_pom = bias > 1e-9 * std::max(1.0, std::sqrt(tu.value));
    return tu;
}

std::size_t recommended_grid_points(const SchemeDescriptor& scheme, const GaussianState& state, double x,
                                    double box_width, const PhysicalUnits& units) {
    double k_max = 0.0;
    const auto account = [&](const GaussianState& s) {
        const double sigma_k = std::sqrt(moments(s, units).var_p) / units.hbar;
        k_max = std::max(k_max, std::abs(s.mean_wavenumber()) + 8.0 * sigma_k);
    };
    account(state.normalized());
    if (!std::holds_alternative<GordonLouisellScheme>(scheme) && !is_grid_backed(scheme)) {
        const ReductionFactors f = reduction_operator_description(scheme, x, units);
        GaussianState mult = state.normalized();
        if (f.pre_dilate) mult = dilate(mult, f.pre_dilate->lambda);
        mult = multiply_gaussian_factor(mult, f.factor_quadratic, f.factor_linear, f.factor_const);
        account(mult);
    }
    const double needed = box_width * k_max * 1.3 / kPi;
    std::size_t n = 256;
    while (static_cast<double>(n) < needed && n < (std::size_t{1} << 30)) n <<= 1;
    return n;
}

UnbiasednessReport check_unbiasedness(const SchemeDescriptor& scheme, std::span<const GaussianState> states,
                                      const PhysicalUnits& units) {
    validate_scheme(scheme, units);
    const double scale = outcome_to_position_scale(scheme);
    UnbiasednessReport report;
    const double quantiles[] = {0.1, 0.3, 0.5, 0.7, 0.9};
    for (const GaussianState& state : states) {
        const Moments m = moments(state, units);
        const OutcomeDistribution dist = outcome_distribution(scheme, state, units);
        report.worst_pom_bias = std::max(report.worst_pom_bias, std::abs(scale * dist.mean() - m.mean_q));

        double avg_posterior_mean = 0.0;
        if (dist.is_gaussian() && !is_grid_backed(scheme)) {
            const auto [x0, h] = std::holds_alternative<GordonLouisellScheme>(scheme)
                                     ? std::pair<double, double>{dist.mean(), std::sqrt(dist.variance())}
                                     : fit_anchor(scheme, state, units);
            const AffinePosteriorMean am = posterior_mean_affine(scheme, state.normalized(), x0, h, units);
            for (const double p : quantiles) {
                const double x = dist.mean() + std::sqrt(dist.variance()) * normal_quantile(p);
                report.worst_reduction_bias =
                    std::max(report.worst_reduction_bias, std::abs(am.slope * x + am.offset - scale * x));
            }
            avg_posterior_mean = am.slope * dist.mean() + am.offset;
        } else {
            double weighted_mean = 0.0;
            for (const double p : quantiles) {
                const double x = dist.table().sample(p);
                const PosteriorResult post = reduce(scheme, state, x, units);
                const double mean_q = moments_grid(post.grid(), units).mean_q;
                report.worst_reduction_bias = std::max(report.worst_reduction_bias, std::abs(mean_q - scale * x));
                weighted_mean += mean_q / static_cast<double>(std::size(quantiles));
            }
            avg_posterior_mean = weighted_mean;  // coarse quantile average for the grid path
        }
        report.worst_avg_reduction_bias =
            std::max(report.worst_avg_reduction_bias, std::abs(avg_posterior_mean - m.mean_q));
    }
    return report;
}

}  // namespace sqlsim
