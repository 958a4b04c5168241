// Copyright 2026 The mvqc Authors
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

namespace mvqc {

// Self-contained oracle harness for the measurement-aware gradients.
// Each instance draws a random family/size/depth (N <= 6, L <= 4), a
// random parameter slot, up to 4 Born-sampled measurement sites, and then
// cross-checks the production code against dense-matrix references:
//
//   - shifted branch replay vs an explicit-matrix branch walk (1e-12),
//   - branch_gradient vs Richardson finite differences of the dense
//     normalized branch expectation,
//   - ensemble_gradient_exact vs finite differences of the dense
//     Born-weighted mixture, and (for N <= 5, where the full
//     density-matrix walk is affordable) of the measurement-channel
//     evolution,
//   - the M = 0 reduction to the textbook shift rule (1e-12),
//   - branch-weight completeness under a shifted occurrence (1e-9).
struct GradcheckOptions {
    int instances = 100;
    uint64_t seed = 12345;
    double rel_tol = 1e-6;
    double abs_tol = 1e-8;
    // Negative control: recomputes every branch gradient with the sign of
    // the expectation-correction term flipped. A healthy suite must FAIL.
    bool corrupt_sign = false;
};

struct GradcheckReport {
    int instances = 0;
    int failures = 0;
    int channel_checked = 0;  // instances small enough for the channel walk
    std::vector<uint64_t> failing_seeds;
    double max_pipeline_dev = 0.0;      // replay vs dense branch (p and <O>)
    double max_branch_dev = 0.0;        // branch gradient vs dense FD
    double max_ensemble_dev = 0.0;      // ensemble gradient vs mixture FD
    double max_channel_dev = 0.0;       // ensemble gradient vs channel FD
    double max_cross_dev = 0.0;         // enumerated mixture vs channel, delta = 0
    double max_reduction_dev = 0.0;     // M = 0 vs textbook shift rule
    double max_completeness_dev = 0.0;  // |1 - sum of shifted branch weights|

    bool passed() const { return failures == 0; }
    std::string summary() const;
};

GradcheckReport run_gradcheck(const GradcheckOptions& options = {});

// Prints the report; returns 0 on pass, the oracle-failure exit code otherwise.
int cmd_gradcheck(const GradcheckOptions& options);

}  // namespace mvqc
