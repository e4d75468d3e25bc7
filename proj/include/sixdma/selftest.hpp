// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Property checks run by `sixdma selftest`.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sixdma {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct SelftestReport {
    std::vector<CheckResult> checks;
    double seconds = 0.0;
    bool passed() const noexcept;
};

/// Runs every property check with draws derived from `seed`. `dominance_trials`
/// full trials are solved for the scheme-dominance check.
SelftestReport run_selftest(std::uint64_t seed = 7, int dominance_trials = 6);

}  // namespace sixdma
