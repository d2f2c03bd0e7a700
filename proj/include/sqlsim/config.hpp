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
#include <string>
#include <vector>

#include "sqlsim/experiments.hpp"

namespace sqlsim {

enum class Experiment { scheme_check, sql_sweep, rp_montecarlo, oracle_validate, variance_curves };

Experiment experiment_from_name(const std::string& name);
std::string experiment_name(Experiment e);

// Fully validated run configuration.  Unknown keys anywhere in the document
// are errors (with a nearest-key suggestion); missing sections fall back to
// documented defaults.
struct RunConfig {
    Experiment experiment = Experiment::scheme_check;
    PhysicalUnits units{};
    GaussianState prior;
    SchemeDescriptor scheme;
    double t_f = 1.0;
    std::size_t n_trials = 10000;
    std::uint64_t seed = 20260809;
    std::size_t emit_trials = 0;  // cap on emitted trial records (0 = none)
    std::size_t grid_points = 4096;
    double grid_span_sigmas = 12.0;
    bool grid_dump = false;
    std::vector<double> sweep_zeta_z = {0.5, 1.0, 2.0, 4.0};
    std::string config_echo;  // canonical JSON of the effective config
};

// Parses a JSON run configuration.  Throws std::invalid_argument for schema
// violations (unknown keys, wrong types, bad values) and for malformed JSON
// (message carries line/column).
RunConfig parse_config(const std::string& text, Experiment experiment);

}  // namespace sqlsim
