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

#include <span>
#include <variant>

#include "sqlsim/gaussian_state.hpp"
#include "sqlsim/grid.hpp"
#include "sqlsim/random.hpp"
#include "sqlsim/schemes.hpp"

namespace sqlsim {

// Outcome distribution p(x|state) dx.  Closed-form Gaussian for the
// Gaussian-preserving schemes, grid-tabulated otherwise.  Outcomes are in the
// scheme's native readout variable (position for qP-class schemes, the
// dimensionless quadrature X for radiation pressure); multiply by
// outcome_to_position_scale() for an unbiased position estimate.
class OutcomeDistribution {
  public:
    static OutcomeDistribution gaussian(double mean, double variance);
    static OutcomeDistribution tabulated(TabulatedDensity density);

    bool is_gaussian() const { return std::holds_alternative<GaussianPart>(impl_); }
    double mean() const;
    double variance() const;
    double density(double x) const;
    double sample(RngStream& rng) const;
    const TabulatedDensity& table() const;

  private:
    struct GaussianPart {
        double mean, variance;
    };
    std::variant<GaussianPart, TabulatedDensity> impl_;
};

struct PosteriorResult {
    double x;
    std::variant<GaussianState, GridState> posterior;  // normalized
    double density_at_x;

    const GaussianState& gaussian() const { return std::get<GaussianState>(posterior); }
    const GridState& grid() const { return std::get<GridState>(posterior); }
};

OutcomeDistribution outcome_distribution(const SchemeDescriptor& scheme, const GaussianState& state,
                                         const PhysicalUnits& units = {});

PosteriorResult reduce(const SchemeDescriptor& scheme, const GaussianState& state, double x,
                       const PhysicalUnits& units = {});

double sample_outcome(const SchemeDescriptor& scheme, const GaussianState& state, RngStream& rng,
                      const PhysicalUnits& units = {});

// Apparatus-added noise (precision) epsilon^2 in position units:
//   von Neumann: Var_probe(Q); three-step: d^2 Var_probe(Q); Gordon-Louisell: 0;
//   radiation pressure: l_tau^2 / (4 alpha^2 e^{2r} e^{2 presqueeze}),
//   grid variants by double quadrature.  State-independent except for the
//   grid-backed full variant.  Requires an unbiased (plausible) scheme.
double precision(const SchemeDescriptor& scheme, const GaussianState& state, const PhysicalUnits& units = {});

// Posterior deviation sigma^2: mean squared distance of the posterior
// position from the recorded outcome, E_x[ Var_q(rho_x) + (<q>_x - x)^2 ].
double posterior_deviation(const SchemeDescriptor& scheme, const GaussianState& state,
                           const PhysicalUnits& units = {});

struct TotalUncertainty {
    double value = 0.0;   // variance of the outcome distribution, position units
    bool biased_pom = false;
};
TotalUncertainty total_uncertainty(const SchemeDescriptor& scheme, const GaussianState& state,
                                   const PhysicalUnits& units = {});

// Worst-case bias diagnostics over a sample of states:
//   pom:            |scale E[x] - <q>|
//   reduction:      max over outcome quantiles of |<q>_x - scale x|
//   avg_reduction:  |E_x <q>_x - <q>|  (zero for every qP-class scheme)
struct UnbiasednessReport {
    double worst_pom_bias = 0.0;
    double worst_reduction_bias = 0.0;
    double worst_avg_reduction_bias = 0.0;
};
UnbiasednessReport check_unbiasedness(const SchemeDescriptor& scheme, std::span<const GaussianState> states,
                                      const PhysicalUnits& units = {});

// Grid size (power of two) resolving both the amplitude and the chirped
// phase of every intermediate state of Omega(x) applied to `state` over a box
// of the given width.  Large couplings can make this exceed what is
// practical; callers decide whether to refine or to fall back to closed
// forms.
std::size_t recommended_grid_points(const SchemeDescriptor& scheme, const GaussianState& state, double x,
                                    double box_width, const PhysicalUnits& units = {});

}  // namespace sqlsim
