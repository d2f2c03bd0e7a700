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

#include <string>
#include <vector>

#include "sqlsim/config.hpp"

namespace sqlsim {

struct RunArtifacts {
    std::vector<std::string> files;  // paths written, manifest first
    bool all_checks_passed = true;   // oracle-validate: every row under threshold
};

// Executes the configured experiment and writes the manifest and CSV tables
// into out_dir (created if missing).  Tables are byte-identical across runs
// of the same config; only the manifest timestamp line differs.
RunArtifacts run_experiment(const RunConfig& config, const std::string& out_dir);

}  // namespace sqlsim
