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
#include <stdexcept>
#include <string>
#include <vector>

#include "mvqc/circuit.hpp"

namespace mvqc {

// Invalid configuration, table schema, or resume mismatch; the CLI maps
// this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Command { Sweep, MutInfo, GradVar };

// Flat key = value experiment configuration ('#' comments allowed).
// Lists are comma-separated; numeric grids also accept start:stop:step
// (inclusive). Unknown keys are rejected. `serialize` emits a canonical
// normalized form that re-parses to the same config; the config hash is
// FNV-1a over that form.
struct ExperimentConfig {
    CircuitFamily family = CircuitFamily::XxzHva;
    std::vector<int> sizes;          // required for sweep/gradvar
    int depth = 16;
    std::vector<double> rates;       // required
    int samples = 0;                 // 0 = scale default (500 desk, 3000 paper)
    uint64_t seed = 12345;
    std::string observable = "Z0 Z1";
    int param_index = 0;
    std::vector<int> separations;    // mutual-information r values; empty = 1..N/2
    bool hea_cnot_wrap = true;
    bool per_layer = false;
    std::string entropy_units = "nats";  // nats | bits
    int chi2_power = 2;
    std::string sigma = "stderr";        // stderr | std
    int k_boot = 100;
    double nu_init = 1.33;
    bool gradvar_global_plateau = false;

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_string(const std::string& text);

    std::string serialize() const;
    uint64_t hash() const;

    // Fills scale-dependent defaults and validates against the command's
    // preconditions (size caps, even sizes where a half-chain cut or the
    // ring ansatz requires them, grid sanity). Throws ConfigError.
    ExperimentConfig resolved(Command command, bool paper_scale) const;
};

uint64_t fnv1a64(const std::string& text);

}  // namespace mvqc
