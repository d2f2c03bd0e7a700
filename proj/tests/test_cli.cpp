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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sqlsim/runner.hpp"

using namespace sqlsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("sqlsim_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SQLSIM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// strip the timestamp line so byte comparisons see only the payload
std::string without_timestamp(std::string text) {
    const auto pos = text.find("generated_at:");
    if (pos == std::string::npos) return text;
    const auto end = text.find('\n', pos);
    text.erase(pos, end - pos + 1);
    return text;
}

}  // namespace

TEST_CASE("minimal config gets the documented defaults") {
    const RunConfig cfg = parse_config("{}", Experiment::scheme_check);
    CHECK(cfg.units.hbar == 1.0);
    CHECK(cfg.units.mass == 1.0);
    CHECK(cfg.units.omega == 1.0);
    CHECK(cfg.grid_points == 4096);
    CHECK(cfg.grid_span_sigmas == 12.0);
    CHECK(cfg.t_f == 1.0);
    CHECK(cfg.n_trials == 10000);
    CHECK(std::holds_alternative<ThreeStepScheme>(cfg.scheme));
    CHECK(moments(cfg.prior).var_q == doctest::Approx(0.5));
    CHECK(!cfg.config_echo.empty());
}

TEST_CASE("unknown keys are fatal and come with a suggestion") {
    try {
        parse_config(R"({"scheme": {"type": "three_step", "zetta_z": 1.0}})", Experiment::scheme_check);
        FAIL("expected a schema error");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("zetta_z") != std::string::npos);
        CHECK(msg.find("zeta_z") != std::string::npos);
        CHECK(msg.find("did you mean") != std::string::npos);
    }
}

TEST_CASE("schema violations") {
    CHECK_THROWS_AS(parse_config(R"({"scheme": {"type": "rp_small_q", "alpha_mag": -5.0}})",
                                 Experiment::rp_montecarlo),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"run": {"t_f": -1.0}})", Experiment::scheme_check), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"run": {"n_trials": 0}})", Experiment::scheme_check), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"grid": {"n_points": 1000}})", Experiment::scheme_check),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"units": {"hbar": 0.0}})", Experiment::scheme_check), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"sweep": {"zeta_z": []}})", Experiment::sql_sweep), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"prior": {"type": "muw", "xi": 1.0}})", Experiment::scheme_check),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"scheme": {"type": "gaussian"}})", Experiment::scheme_check),
                    std::invalid_argument);
    // malformed JSON carries position info
    try {
        parse_config("{\"units\": }", Experiment::scheme_check);
        FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("parse error") != std::string::npos);
    }
}

TEST_CASE("probe and prior specs") {
    const RunConfig cfg = parse_config(
        R"({"scheme": {"type": "three_step", "zeta_z": 3.0, "probe": {"type": "tcs", "xi": 5.0}},
            "prior": {"type": "tcs", "mu_re": 1.5, "nu_re": 1.1180339887498949, "q0": 0.3}})",
        Experiment::scheme_check);
    const auto& ts = std::get<ThreeStepScheme>(cfg.scheme);
    CHECK(moments(ts.probe).corr == doctest::Approx(-5.0).epsilon(1e-12));
    CHECK(cfg.prior.mean_position() == doctest::Approx(0.3));
    CHECK_THROWS_AS(parse_config(R"({"prior": {"type": "tcs", "xi": 1.0, "mu_re": 1.0}})",
                                 Experiment::scheme_check),
                    std::invalid_argument);
}

TEST_CASE("sql-sweep emits the documented table deterministically") {
    const RunConfig cfg = parse_config(
        R"({"scheme": {"type": "three_step", "zeta_z": 3.0, "probe": {"type": "tcs", "xi": 5.0}},
            "run": {"t_f": 0.995, "n_trials": 200, "seed": 99},
            "sweep": {"zeta_z": [0.5, 1.0, 3.0]}})",
        Experiment::sql_sweep);
    const fs::path dir_a = fresh_dir("sweep_a");
    const fs::path dir_b = fresh_dir("sweep_b");
    const RunArtifacts a = run_experiment(cfg, dir_a.string());
    const RunArtifacts b = run_experiment(cfg, dir_b.string());
    REQUIRE(a.files.size() == 2);
    const std::string csv_a = slurp(dir_a / "sql_sweep.csv");
    CHECK(csv_a.substr(0, csv_a.find('\n')) ==
          "zeta_z,d,epsilon_sq,sigma_sq,delta_sq_pred,pred_se,sql,violated,seed");
    CHECK(csv_a == slurp(dir_b / "sql_sweep.csv"));
    CHECK(without_timestamp(slurp(dir_a / "manifest.txt")) ==
          without_timestamp(slurp(dir_b / "manifest.txt")));
    // the high-squeezing row is breached, the low one is not
    std::istringstream rows(csv_a);
    std::string line;
    std::getline(rows, line);
    std::getline(rows, line);
    CHECK(line.find(",0,99") != std::string::npos);  // zeta_z = 0.5: violated = 0
    std::getline(rows, line);
    std::getline(rows, line);
    CHECK(line.find(",1,99") != std::string::npos);  // zeta_z = 3.0: violated = 1
}

TEST_CASE("rp-montecarlo writes report and capped trial records") {
    const RunConfig cfg = parse_config(
        R"({"run": {"n_trials": 400, "seed": 3, "emit_trials": 10}})", Experiment::rp_montecarlo);
    const fs::path dir = fresh_dir("rp");
    const RunArtifacts art = run_experiment(cfg, dir.string());
    REQUIRE(art.files.size() == 3);
    const std::string report = slurp(dir / "rp_montecarlo.csv");
    CHECK(report.find("contractive_fraction") != std::string::npos);
    const std::string trials = slurp(dir / "rp_trials.csv");
    CHECK(std::count(trials.begin(), trials.end(), '\n') == 11);  // header + 10 rows
}

TEST_CASE("variance-curves and scheme-check produce tables") {
    const fs::path dir = fresh_dir("curves");
    const RunConfig cfg = parse_config(R"({"prior": {"type": "tcs", "xi": 1.5}, "run": {"t_f": 2.0}})",
                                       Experiment::variance_curves);
    run_experiment(cfg, dir.string());
    const std::string csv = slurp(dir / "variance_curves.csv");
    CHECK(csv.find("t,yuen,braginskii,sql,robertson_floor") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 202);

    const fs::path dir_dump = fresh_dir("dump");
    const RunConfig cfg_dump = parse_config(R"({"grid": {"dump": true}, "run": {"t_f": 1.0}})",
                                            Experiment::variance_curves);
    run_experiment(cfg_dump, dir_dump.string());
    CHECK(slurp(dir_dump / "psi_dump.csv").substr(0, 15) == "q,re_psi,im_psi");

    const fs::path dir2 = fresh_dir("check");
    const RunConfig cfg2 = parse_config("{}", Experiment::scheme_check);
    run_experiment(cfg2, dir2.string());
    const std::string check_csv = slurp(dir2 / "scheme_check.csv");
    CHECK(check_csv.find("eps_sq") != std::string::npos);
    CHECK(std::count(check_csv.begin(), check_csv.end(), '\n') == 2);
}

TEST_CASE("scheme-check runs for every scheme type") {
    const std::pair<const char*, const char*> cases[] = {
        {"vn", R"({"scheme": {"type": "von_neumann", "probe": {"type": "tcs", "xi": 1.0}}})"},
        {"gl", R"({"scheme": {"type": "gordon_louisell", "target": {"type": "tcs", "xi": 2.0}}})"},
        {"rp", R"({"scheme": {"type": "rp_small_q", "alpha_mag": 40.0},
                   "prior": {"type": "muw", "delta_sq": 4e-4}, "run": {"t_f": 1e-3}})"},
        {"rpf", R"({"scheme": {"type": "rp_full", "alpha_mag": 10.0, "feedback_gain": 0.0},
                    "prior": {"type": "muw", "delta_sq": 4e-4}, "run": {"t_f": 1e-3, "n_trials": 8}})"},
    };
    for (const auto& [tag, text] : cases) {
        CAPTURE(tag);
        const fs::path dir = fresh_dir(std::string("check_") + tag);
        const RunConfig cfg = parse_config(text, Experiment::scheme_check);
        const RunArtifacts art = run_experiment(cfg, dir.string());
        CHECK(art.files.size() == 2);
        CHECK(fs::exists(dir / "scheme_check.csv"));
    }
}

TEST_CASE("cli process exit codes") {
    CHECK(run_cli("") == 2);                      // missing subcommand
    CHECK(run_cli("make-coffee") == 2);           // unknown experiment
    CHECK(run_cli("sql-sweep --config /nonexistent.json") == 2);
    const fs::path dir = fresh_dir("cli_cfg");
    {
        std::ofstream bad(dir / "bad.json");
        bad << R"({"scheme": {"zetta_z": 1.0}})";
    }
    CHECK(run_cli("scheme-check --config " + (dir / "bad.json").string()) == 2);
    {
        std::ofstream ok(dir / "ok.json");
        ok << R"({"run": {"n_trials": 50}})";
    }
    CHECK(run_cli("sql-sweep --config " + (dir / "ok.json").string() + " --out " + (dir / "out").string()) == 0);
    CHECK(fs::exists(dir / "out" / "sql_sweep.csv"));
    // numerical-validation failure: small-q scheme fed a wide prior
    {
        std::ofstream invalid(dir / "invalid.json");
        invalid << R"({"scheme": {"type": "rp_small_q"}, "prior": {"type": "muw", "delta_sq": 0.5}})";
    }
    CHECK(run_cli("rp-montecarlo --config " + (dir / "invalid.json").string() + " --trials 10 --out " +
                  (dir / "out2").string()) == 1);
}

TEST_CASE("cli seed and trial overrides reach the manifest") {
    const fs::path dir = fresh_dir("cli_override");
    CHECK(run_cli("rp-montecarlo --trials 64 --seed 123 --out " + dir.string()) == 0);
    const std::string manifest = slurp(dir / "manifest.txt");
    CHECK(manifest.find("seed: 123") != std::string::npos);
    const std::string csv = slurp(dir / "rp_montecarlo.csv");
    CHECK(csv.find("\n64,") != std::string::npos);
}
