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

namespace sqlsim {

// Deterministic, platform-independent random stream (splitmix64).
// Monte Carlo trials get independent substreams derived from a master seed
// by a counter splitter, so trial i is reproducible regardless of ordering.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    static RngStream substream(std::uint64_t master_seed, std::uint64_t counter);

    std::uint64_t next_u64();

    // Uniform on the open interval (0, 1).
    double uniform01();

    // Standard normal deviate via the inverse-CDF (Wichura AS241) of uniform01().
    double normal();

  private:
    std::uint64_t state_;
};

// Inverse of the standard normal CDF, accurate to ~1e-15 for p in (0,1).
double normal_quantile(double p);

}  // namespace sqlsim
