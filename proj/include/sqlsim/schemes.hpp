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

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "sqlsim/gaussian_state.hpp"
#include "sqlsim/lie_algebra.hpp"

namespace sqlsim {

// Standard von Neumann measurement: impulsive qP coupling, probe position
// read out.  Reduction operator Omega(x) = phi(x - q).
struct VonNeumannScheme {
    GaussianState probe;
};

// Pre-squeeze + von Neumann coupling + outcome-proportional feedback.
struct ThreeStepScheme {
    ThreeStepParams params;
    GaussianState probe;
};

// Gordon-Louisell measurement Omega(x) = |target recentered at x><x|:
// noiseless position readout that leaves the system in the target state
// regardless of the input.
struct GordonLouisellScheme {
    GaussianState target;  // template, centered at 0; recentered at the outcome
};

struct RadiationPressureParams {
    double alpha_mag = 1.0e3;  // |alpha| of the coherent probe
    double squeeze_r = 0.0;    // probe squeezing r
    double l_tau = 1.0;        // length scale L/(omega_0 tau); q_scaled = q/l_tau
    double feedback_gain = 1.0;  // tau'/tau
    double presqueeze = 0.0;     // tau''/tau; amplifies the read-out coordinate by e^{tau''/tau}
};

// Radiation-pressure coupling q A^dag A with homodyne readout of the scaled
// quadrature X.  The small-q variant keeps the exact Gaussian closure of the
// quadratic-exponent operator (valid for <q_scaled> + 3 std << 1); the full
// variant evaluates the exact sin/cos operator pointwise on a grid.
struct RadiationPressureSmallQ {
    RadiationPressureParams params;
};

struct RadiationPressureFull {
    RadiationPressureParams params;
};

using SchemeDescriptor =
    std::variant<VonNeumannScheme, ThreeStepScheme, GordonLouisellScheme, RadiationPressureSmallQ,
                 RadiationPressureFull>;

// Throws std::invalid_argument when descriptor invariants fail (probe not
// normalized / not centered / not even; nonpositive alpha_mag or l_tau; ...).
void validate_scheme(const SchemeDescriptor& scheme, const PhysicalUnits& units = {});

std::string scheme_name(const SchemeDescriptor& scheme);

// The dynamics matrix of the scheme where one exists (von Neumann and
// three-step variants); nullopt for schemes without a qP-class description.
std::optional<AbcdMatrix> scheme_abcd(const SchemeDescriptor& scheme);

bool is_grid_backed(const SchemeDescriptor& scheme);

// Outcome calibration: position estimate = outcome_to_position_scale * x.
// 1 for position-outcome schemes; l_tau e^{-presqueeze} for the
// radiation-pressure readout of the dimensionless quadrature X.
double outcome_to_position_scale(const SchemeDescriptor& scheme);

// One step of the factor sequence defining Omega(x) for Gaussian-preserving
// schemes.  Factors apply in order: pre-dilatation, multiplication by
// exp(-fq q^2 + fl q + fc), post-dilatation, position shift.  A dilatation
// step is the unitary dilate(lambda) times exp(extra_log_amp); nonzero
// extra_log_amp carries the Jacobian of a non-unitary q p exponential so that
// outcome densities integrate to one.
struct DilateStep {
    double lambda = 1.0;
    double extra_log_amp = 0.0;
};

struct ReductionFactors {
    std::optional<DilateStep> pre_dilate;
    cdouble factor_quadratic{0.0, 0.0};
    cdouble factor_linear{0.0, 0.0};
    cdouble factor_const{0.0, 0.0};
    std::optional<DilateStep> post_dilate;
    double post_shift = 0.0;

    GaussianState apply(const GaussianState& s) const;
};

// Factor sequence of Omega(x) for a Gaussian-preserving scheme.  Throws for
// grid-backed and Gordon-Louisell variants (see grid_reduction / the GL
// special case in reduce()).
ReductionFactors reduction_operator_description(const SchemeDescriptor& scheme, double x,
                                                const PhysicalUnits& units = {});

// Pointwise form of Omega(x) for grid application: same dilatation/shift
// structure, with the multiplicative part as a complex function of q
// (exact sin/cos factors for the full radiation-pressure variants).
struct GridReduction {
    std::optional<DilateStep> pre_dilate;
    std::function<cdouble(double q)> multiplier;
    std::optional<DilateStep> post_dilate;
    double post_shift = 0.0;
};

GridReduction grid_reduction(const SchemeDescriptor& scheme, double x, const PhysicalUnits& units = {});

// The q-compatible POM kernel G(x, q): outcome probability density at x given
// position q, with all dilatation Jacobians folded in so that
// integral over x of G(x, q) dx = 1 for every q.  Null for Gordon-Louisell
// (a delta kernel; its outcome density is |psi(x)|^2).
struct SchemeKernels {
    std::function<double(double x, double q)> pom;
    // Posterior position pullback q_post = pull_state * q + pull_outcome * x,
    // mapping a point q of the pre-measurement state through the reduction.
    double pull_state = 1.0;
    double pull_outcome = 0.0;
    // Rough center/width of the kernel in x for a given q, used to size
    // outcome grids.
    std::function<double(double q)> center;
    double width = 1.0;
};

std::optional<SchemeKernels> scheme_kernels(const SchemeDescriptor& scheme, const PhysicalUnits& units = {});

// Small-q validity guard for the radiation-pressure closed forms:
// |<u>| + 3 std(u) < 0.1 for the amplified coordinate u = q e^{presqueeze}/l_tau.
// Throws std::domain_error with guidance to use the full variant.
void require_small_q_validity(const RadiationPressureParams& p, const GaussianState& state,
                              const PhysicalUnits& units = {});

}  // namespace sqlsim
