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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sqlsim/runner.hpp"

namespace {

// Exit codes: 0 ok, 1 numerical-validation failure, 2 usage/config error.
constexpr int kOk = 0;
constexpr int kNumericalFailure = 1;
constexpr int kUsageError = 2;

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot read config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Repeated position measurements of a free mass: measurement schemes, noise "
                 "functionals and standard-quantum-limit experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed_override = 0;
    bool seed_given = false;
    std::uint64_t trials_override = 0;
    bool trials_given = false;

    for (const char* name :
         {"scheme-check", "sql-sweep", "rp-montecarlo", "oracle-validate", "variance-curves"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration");
        sub->add_option("--out", out_dir, "output directory")->envname("SQLSIM_OUT_DIR");
        sub->add_option_function<std::uint64_t>(
               "--seed", [&](std::uint64_t v) { seed_override = v; seed_given = true; }, "master seed override");
        sub->add_option_function<std::uint64_t>(
               "--trials", [&](std::uint64_t v) { trials_override = v; trials_given = true; },
               "trial count override");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        const std::string name = app.get_subcommands().front()->get_name();
        const std::string text = config_path.empty() ? std::string("{}") : read_file(config_path);
        sqlsim::RunConfig config = sqlsim::parse_config(text, sqlsim::experiment_from_name(name));
        if (seed_given) config.seed = seed_override;
        if (trials_given) {
            if (trials_override < 1) throw std::invalid_argument("--trials must be at least 1");
            config.n_trials = trials_override;
        }
        const sqlsim::RunArtifacts artifacts = sqlsim::run_experiment(config, out_dir);
        for (const auto& f : artifacts.files) std::cout << "wrote " << f << "\n";
        if (!artifacts.all_checks_passed) {
            std::cerr << "oracle-validate: at least one check exceeded its threshold\n";
            return kNumericalFailure;
        }
        return kOk;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericalFailure;
    }
}
