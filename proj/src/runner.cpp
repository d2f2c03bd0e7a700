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

#include "sqlsim/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "sqlsim/table.hpp"

namespace sqlsim {

namespace {

namespace fs = std::filesystem;

std::string manifest_text(const RunConfig& cfg) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char stamp[64];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    std::string out;
    out += "experiment: " + experiment_name(cfg.experiment) + "\n";
    out += "generated_at: " + std::string(stamp) + "\n";
    out += "seed: " + std::to_string(cfg.seed) + "\n";
    out += "tool: sqlsim 0.1.0\n";
    out += "config: " + cfg.config_echo + "\n";
    return out;
}

GridState prior_on_grid(const RunConfig& cfg, double extra_margin = 1.0) {
    const GaussianState prior = cfg.prior.normalized();
    const Grid grid =
        Grid::covering(std::span<const GaussianState>(&prior, 1), cfg.grid_span_sigmas + 2.0, cfg.grid_points,
                       extra_margin * std::sqrt(moments(prior).var_q));
    return discretize(prior, grid, cfg.units);
}

void run_scheme_check(const RunConfig& cfg, const std::string& out_dir, RunArtifacts& artifacts) {
    const double eps_sq = precision(cfg.scheme, cfg.prior, cfg.units);
    const double sigma_sq = posterior_deviation(cfg.scheme, cfg.prior, cfg.units);
    const TotalUncertainty tu = total_uncertainty(cfg.scheme, cfg.prior, cfg.units);
    const OncLedger ledger =
        onc_ledger(RepeatedMeasurementConfig{cfg.scheme, cfg.prior, cfg.t_f, 16, cfg.seed, cfg.units});

    const GaussianState samples[] = {cfg.prior, shift_position(cfg.prior, std::sqrt(moments(cfg.prior).var_q))};
    const UnbiasednessReport ub = check_unbiasedness(cfg.scheme, samples, cfg.units);

    double completeness = 0.0;
    double reduce_l2 = 0.0;
    {
        const GridState gs = prior_on_grid(cfg);
        completeness = completeness_residual(cfg.scheme, gs, cfg.units);
    }
    if (!is_grid_backed(cfg.scheme)) {
        const OutcomeDistribution dist = outcome_distribution(cfg.scheme, cfg.prior, cfg.units);
        const double x = dist.mean() + 0.7 * std::sqrt(dist.variance());
        const PosteriorResult post = reduce(cfg.scheme, cfg.prior, x, cfg.units);
        // Box must hold prior, posterior, and the pre-feedback intermediate.
        double back_shift = 0.0;
        if (!std::holds_alternative<GordonLouisellScheme>(cfg.scheme))
            back_shift = reduction_operator_description(cfg.scheme, x, cfg.units).post_shift;
        const GaussianState states[] = {cfg.prior.normalized(), post.gaussian(),
                                        shift_position(post.gaussian(), -back_shift)};
        Grid grid = Grid::covering(states, 14.0, cfg.grid_points);
        const std::size_t needed =
            recommended_grid_points(cfg.scheme, cfg.prior, x, grid.length(), cfg.units);
        if (needed > 16384) {
            reduce_l2 = std::nan("");  // phase content too fast for a practical grid
        } else {
            grid.n_points = std::max(cfg.grid_points, needed);
            const GridState gs = discretize(cfg.prior.normalized(), grid, cfg.units);
            const GridState post_grid = apply_reduction_grid(cfg.scheme, gs, x, cfg.units);
            reduce_l2 = l2_distance(post_grid, post.gaussian());
        }
    }

    const auto abcd = scheme_abcd(cfg.scheme);
    Table table({"scheme", "eps_sq", "sigma_sq", "total_uncertainty", "biased_pom", "onc_lhs", "onc_rhs",
                 "breach_candidate", "d_coeff", "pom_bias", "reduction_bias", "avg_reduction_bias",
                 "completeness_residual", "reduce_l2_vs_grid", "seed"});
    table.add_row({scheme_name(cfg.scheme), eps_sq, sigma_sq, tu.value, tu.biased_pom, ledger.lhs, ledger.rhs,
                   ledger.breach_candidate, abcd ? abcd->d.real() : std::nan(""), ub.worst_pom_bias,
                   ub.worst_reduction_bias, ub.worst_avg_reduction_bias, completeness, reduce_l2,
                   static_cast<unsigned long long>(cfg.seed)});
    const std::string path = out_dir + "/scheme_check.csv";
    table.write_csv(path);
    artifacts.files.push_back(path);
}

void run_sql_sweep(const RunConfig& cfg, const std::string& out_dir, RunArtifacts& artifacts) {
    GaussianState probe = std::holds_alternative<ThreeStepScheme>(cfg.scheme)
                              ? std::get<ThreeStepScheme>(cfg.scheme).probe
                              : make_muw(0.0, 0.0, 0.5, cfg.units);
    Table table({"zeta_z", "d", "epsilon_sq", "sigma_sq", "delta_sq_pred", "pred_se", "sql", "violated", "seed"});
    for (const double zeta_z : cfg.sweep_zeta_z) {
        const ThreeStepScheme scheme{breaching_three_step(zeta_z), probe};
        RepeatedMeasurementConfig rc{SchemeDescriptor(scheme), cfg.prior, cfg.t_f, cfg.n_trials, cfg.seed,
                                     cfg.units};
        const auto [records, report] = run_repeated(rc);
        (void)records;
        table.add_row({zeta_z, abcd_from_three_step(scheme.params).d.real(), report.avg_precision_evolved,
                       report.posterior_deviation, report.predictive_uncertainty.value,
                       report.predictive_uncertainty.std_error, report.sql, report.sql_breached,
                       static_cast<unsigned long long>(cfg.seed)});
    }
    const std::string path = out_dir + "/sql_sweep.csv";
    table.write_csv(path);
    artifacts.files.push_back(path);
}

void run_rp_montecarlo(const RunConfig& cfg, const std::string& out_dir, RunArtifacts& artifacts) {
    RepeatedMeasurementConfig rc{cfg.scheme, cfg.prior, cfg.t_f, cfg.n_trials, cfg.seed, cfg.units};
    const auto [records, report] = run_repeated(rc);

    Table table({"n_trials", "contractive_fraction", "fraction_se", "delta_sq_pred", "pred_se", "sql",
                 "sql_breached", "eps_sq", "sigma_sq", "seed"});
    table.add_row({static_cast<unsigned long long>(report.n_trials), report.contractive_fraction.value,
                   report.contractive_fraction.std_error, report.predictive_uncertainty.value,
                   report.predictive_uncertainty.std_error, report.sql, report.sql_breached,
                   report.avg_precision_evolved, report.posterior_deviation,
                   static_cast<unsigned long long>(cfg.seed)});
    const std::string path = out_dir + "/rp_montecarlo.csv";
    table.write_csv(path);
    artifacts.files.push_back(path);

    if (cfg.emit_trials > 0) {
        Table trials({"trial", "x1", "post_mean_q", "post_var_q", "post_corr", "h_x", "delta_sq_x", "contractive",
                      "seed"});
        const std::size_t cap = std::min(cfg.emit_trials, records.size());
        for (std::size_t i = 0; i < cap; ++i) {
            const TrialRecord& r = records[i];
            trials.add_row({static_cast<unsigned long long>(i), r.x1, r.posterior_moments.mean_q,
                            r.posterior_moments.var_q, r.posterior_moments.corr, r.h_x, r.delta_sq_x,
                            r.contractive, static_cast<unsigned long long>(cfg.seed)});
        }
        const std::string tpath = out_dir + "/rp_trials.csv";
        trials.write_csv(tpath);
        artifacts.files.push_back(tpath);
    }
}

void run_oracle_validate(const RunConfig& cfg, const std::string& out_dir, RunArtifacts& artifacts) {
    Table table({"case", "metric", "value", "threshold", "pass"});
    bool all_pass = true;
    const auto add = [&](const std::string& name, const std::string& metric, double value, double threshold) {
        const bool pass = value < threshold;
        all_pass = all_pass && pass;
        table.add_row({name, metric, value, threshold, pass});
    };

    const PhysicalUnits& u = cfg.units;
    const GaussianState prior = cfg.prior.normalized();

    {
        const GridState gs = prior_on_grid(cfg);
        const Moments ga = moments_grid(gs, u);
        const Moments an = moments(prior, u);
        add("discretize_prior", "max_moment_error",
            std::max({std::abs(ga.mean_q - an.mean_q), std::abs(ga.var_q - an.var_q),
                      std::abs(ga.corr - an.corr), std::abs(ga.var_p - an.var_p)}),
            1e-8);
        const GridState evolved = free_evolve_grid(gs, cfg.t_f, u);
        add("free_evolution", "l2_vs_closed_form", l2_distance(evolved, free_evolve(prior, cfg.t_f, u)), 1e-6);
    }

    const auto reduce_case = [&](const SchemeDescriptor& scheme, const GaussianState& case_prior,
                                 std::size_t n_points, bool adapt = true) {
        const OutcomeDistribution dist = outcome_distribution(scheme, case_prior, u);
        const double x = dist.mean() + 0.5 * std::sqrt(dist.variance());
        const PosteriorResult post = reduce(scheme, case_prior, x, u);
        const double back_shift = reduction_operator_description(scheme, x, u).post_shift;
        const GaussianState states[] = {case_prior, post.gaussian(), shift_position(post.gaussian(), -back_shift)};
        Grid grid = Grid::covering(states, 14.0, n_points);
        if (adapt)
            grid.n_points = std::max(n_points, recommended_grid_points(scheme, case_prior, x, grid.length(), u));
        const GridState gs = discretize(case_prior, grid, u);
        return l2_distance(apply_reduction_grid(scheme, gs, x, u), post.gaussian());
    };

    const GaussianState probe = make_tcs_with_xi(1.0, 0.0, u);
    const SchemeDescriptor vn{VonNeumannScheme{make_muw(0.0, 0.0, 0.5, u)}};
    const SchemeDescriptor ts{ThreeStepScheme{breaching_three_step(std::log(2.0)), probe}};
    for (const auto& [name, scheme] : {std::pair<std::string, const SchemeDescriptor*>{"von_neumann", &vn},
                                       {"three_step", &ts}}) {
        add(name, "reduce_l2_vs_grid", reduce_case(*scheme, prior, cfg.grid_points), 1e-6);
        add(name, "completeness_residual", completeness_residual(*scheme, prior_on_grid(cfg), u), 1e-6);
    }
    {
        const SchemeDescriptor rp{RadiationPressureSmallQ{RadiationPressureParams{40.0, 0.5, 1.0, 1.0, 0.3}}};
        const GaussianState rp_prior = make_muw(0.0, 0.0, 4.0e-4, u);
        add("rp_small_q", "reduce_l2_vs_grid", reduce_case(rp, rp_prior, cfg.grid_points), 1e-6);
        const Grid grid = Grid::covering(std::span<const GaussianState>(&rp_prior, 1), 14.0, cfg.grid_points);
        add("rp_small_q", "completeness_residual", completeness_residual(rp, discretize(rp_prior, grid, u), u),
            1e-6);
    }
    {
        const GordonLouisellScheme gl{make_tcs_with_xi(1.0, 0.0, u)};
        const PosteriorResult post = reduce(SchemeDescriptor(gl), prior, 0.4, u);
        const GaussianState target = shift_position(gl.target, 0.4);
        add("gordon_louisell", "posterior_infidelity", 1.0 - std::abs(overlap(post.gaussian(), target)), 1e-10);
    }
    {
        // Refinement: halving the spacing must shrink the disagreement 4x.
        // zeta_z = 2 makes the pre-dilatation factor ~2 cells wide at n = 512,
        // so the coarse error sits well above the roundoff floor.
        const SchemeDescriptor sharp{ThreeStepScheme{breaching_three_step(2.0), probe}};
        const double coarse = reduce_case(sharp, prior, 512, false);
        const double fine = reduce_case(sharp, prior, 1024, false);
        add("refinement", "fine_over_quarter_coarse", fine / (0.25 * coarse), 1.0);
    }

    const std::string path = out_dir + "/oracle_validate.csv";
    table.write_csv(path);
    artifacts.files.push_back(path);
    artifacts.all_checks_passed = all_pass;

    if (cfg.grid_dump) {
        const std::string dump_path = out_dir + "/psi_dump.csv";
        write_text_file(dump_path, dump_grid_state(prior_on_grid(cfg)));
        artifacts.files.push_back(dump_path);
    }
}

void run_variance_curves(const RunConfig& cfg, const std::string& out_dir, RunArtifacts& artifacts) {
    std::vector<double> ts;
    const std::size_t n = 201;
    for (std::size_t i = 0; i < n; ++i) ts.push_back(cfg.t_f * static_cast<double>(i) / static_cast<double>(n - 1));
    const auto rows = braginskii_vs_yuen(cfg.prior, ts, cfg.units);
    const Moments m = moments(cfg.prior, cfg.units);
    Table table({"t", "yuen", "braginskii", "sql", "robertson_floor", "var_q0", "corr0", "var_p0"});
    for (const auto& r : rows)
        table.add_row({r.t, r.yuen, r.braginskii, r.sql, r.robertson_floor, m.var_q, m.corr, m.var_p});
    const std::string path = out_dir + "/variance_curves.csv";
    table.write_csv(path);
    artifacts.files.push_back(path);

    if (cfg.grid_dump) {
        const std::string dump_path = out_dir + "/psi_dump.csv";
        write_text_file(dump_path, dump_grid_state(prior_on_grid(cfg)));
        artifacts.files.push_back(dump_path);
    }
}

}  // namespace

RunArtifacts run_experiment(const RunConfig& config, const std::string& out_dir) {
    fs::create_directories(out_dir);
    RunArtifacts artifacts;
    const std::string manifest_path = out_dir + "/manifest.txt";
    write_text_file(manifest_path, manifest_text(config));
    artifacts.files.push_back(manifest_path);

    switch (config.experiment) {
        case Experiment::scheme_check: run_scheme_check(config, out_dir, artifacts); break;
        case Experiment::sql_sweep: run_sql_sweep(config, out_dir, artifacts); break;
        case Experiment::rp_montecarlo: run_rp_montecarlo(config, out_dir, artifacts); break;
        case Experiment::oracle_validate: run_oracle_validate(config, out_dir, artifacts); break;
        case Experiment::variance_curves: run_variance_curves(config, out_dir, artifacts); break;
    }
    return artifacts;
}

}  // namespace sqlsim
