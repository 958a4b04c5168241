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

#include <functional>
#include <vector>

namespace mvqc {

// Downhill-simplex minimizer with the standard coefficient set
// (reflection 1, expansion 2, contraction 0.5, shrink 0.5). Fully
// deterministic: no randomness, stable tie handling.
struct NelderMeadOptions {
    int max_iterations = 2000;
    double tolerance = 1e-8;  // stop when max-min objective over the simplex drops below
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// `step` gives the per-dimension offset of the initial simplex vertices
// from `start`; entries must be nonzero.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             const std::vector<double>& start, const std::vector<double>& step,
                             const NelderMeadOptions& options = {});

}  // namespace mvqc
