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

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sqlsim/instruments.hpp"

namespace sqlsim {

// Repeated position measurement: measure, evolve freely for t_f, and score
// the predicted uncertainty of a second measurement on the evolved posterior.
struct RepeatedMeasurementConfig {
    SchemeDescriptor scheme;
    GaussianState prior;
    double t_f = 1.0;
    std::size_t n_trials = 10000;
    std::uint64_t seed = 0;
    PhysicalUnits units{};
    // The apparatus of the second measurement; defaults to the first.
    std::optional<SchemeDescriptor> second_scheme{};

    void validate() const;
};

struct TrialRecord {
    double x1 = 0.0;  // first outcome, native readout units
    Moments posterior_moments{};
    double h_x = 0.0;        // mean-value prediction of the second outcome (position units)
    double delta_sq_x = 0.0; // predictive uncertainty of the second measurement
    bool contractive = false;
};

struct MonteCarloValue {
    double value = 0.0;
    double std_error = 0.0;  // batch-means standard error (20 batches)
};

struct SqlReport {
    MonteCarloValue predictive_uncertainty{};
    double sql = 0.0;                          // hbar t_f / m
    double avg_precision_evolved = 0.0;        // lhs of the Ozawa necessary condition
    double posterior_deviation = 0.0;          // rhs (sigma^2 of the first instrument)
    bool onc_breach_candidate = false;         // lhs < rhs: breaching not excluded
    bool sql_breached = false;                 // predictive + 3 SE < sql
    MonteCarloValue contractive_fraction{};
    MonteCarloValue avg_evolved_posterior_variance{};
    std::size_t n_trials = 0;
};

// Runs the protocol trial by trial: sample x1, reduce, evolve by t_f, and
// take the second measurement's total uncertainty on the evolved posterior
// (precision of the second apparatus + evolved posterior variance for the
// unbiased schemes; the grid-backed variant integrates the biased second
// outcome distribution around h(x)).  Deterministic given the seed; trial i
// draws from an independent substream, so records do not depend on ordering.
std::pair<std::vector<TrialRecord>, SqlReport> run_repeated(const RepeatedMeasurementConfig& config);

struct OncLedger {
    double lhs = 0.0;  // averaged precision of the evolved second measurement
    double rhs = 0.0;  // posterior deviation of the first
    bool breach_candidate = false;
};
OncLedger onc_ledger(const RepeatedMeasurementConfig& config);

MonteCarloValue contractive_fraction_sweep(const SchemeDescriptor& scheme, const GaussianState& prior,
                                           std::size_t n_trials, std::uint64_t seed,
                                           const PhysicalUnits& units = {});

// Var(q, t) with and without the position-momentum correlation term:
//   yuen       - exact second-moment evolution of this state;
//   braginskii - correlation-free bound Var(q,0) + hbar^2 t^2 / (4 Var(q,0) m^2);
//   sql        - hbar t / m (the bound after minimizing braginskii over Var(q,0));
//   robertson  - commutator floor hbar^2 t^2 / (4 Var(q,0) m^2).
struct VarianceCurveRow {
    double t = 0.0;
    double yuen = 0.0;
    double braginskii = 0.0;
    double sql = 0.0;
    double robertson_floor = 0.0;
};
std::vector<VarianceCurveRow> braginskii_vs_yuen(const GaussianState& state, std::span<const double> t_grid,
                                                 const PhysicalUnits& units = {});

}  // namespace sqlsim
