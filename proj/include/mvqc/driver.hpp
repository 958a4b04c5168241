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

#include "mvqc/collapse.hpp"
#include "mvqc/config.hpp"
#include "mvqc/ensemble_table.hpp"

namespace mvqc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNoConverge = 3;
inline constexpr int kExitOracle = 4;

struct DriverOptions {
    int threads = 1;
    bool resume = false;
    bool paper_scale = false;
    bool write_raw = false;
    std::string out_dir = ".";
    // Stop after this many incomplete cells have been finished (0 = all).
    // A truncated run leaves a manifest that a --resume run completes;
    // final CSVs are only written once every cell is done.
    int max_cells = 0;
    bool quiet = false;
};

// Entanglement-entropy sweep over (N, p). Writes sweep_<family>.csv,
// a manifest next to it, optionally *_raw.csv and *_layers.csv.
int cmd_sweep(const ExperimentConfig& config, const DriverOptions& options);

// Mutual information I(0, r) over (p, r) at fixed N. Writes
// mutinfo_<family>.csv (+ manifest, optional raw).
int cmd_mutinfo(const ExperimentConfig& config, const DriverOptions& options);

// Sampled variance of one branch gradient over (N, p). Writes
// gradvar_<family>.csv (+ manifest, optional raw).
int cmd_gradvar(const ExperimentConfig& config, const DriverOptions& options);

struct CollapseArgs {
    std::string table_path;
    std::string raw_path;        // optional: enables bootstrap + weighted extrapolation
    std::string mode = "entropy";  // entropy | gradvar
    double p_c = -1.0;             // required in gradvar mode
    int k_boot = 100;
    uint64_t seed = 12345;
    CollapseOptions entropy_options;
    GradVarCollapseOptions gradvar_options;
};

struct CollapseReport {
    std::string mode;
    CollapseFit entropy_fit;
    GradVarCollapseFit gradvar_fit;
    bool extrapolated = false;
    ExtrapolationFit extrapolation;
    std::string text;  // the rendered report, as written to collapse_report.txt
};

// Fits a scaling collapse to a previously written table. Writes
// collapse_report.txt and collapse_points.csv into options.out_dir and
// echoes the report to stdout. Returns kExitNoConverge if the optimizer
// did not converge.
int cmd_collapse(const CollapseArgs& args, const DriverOptions& options,
                 CollapseReport* report = nullptr);

}  // namespace mvqc
