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
#include <functional>
#include <optional>
#include <vector>

#include "mvqc/circuit.hpp"
#include "mvqc/state_vector.hpp"

namespace mvqc {

struct MeasurementSite {
    int layer;  // measurement happens after this layer's unitaries
    int qubit;
    bool operator==(const MeasurementSite&) const = default;
};

// One realized branch: where measurements happened, what came out, and the
// Born weight p_M of that outcome string (product of the conditional
// probabilities realized at each site).
struct MeasurementRecord {
    std::vector<MeasurementSite> sites;
    std::vector<uint8_t> outcomes;
    double branch_probability = 1.0;
    uint64_t rng_seed = 0;

    size_t num_measurements() const { return sites.size(); }
};

struct TrajectoryResult {
    StateVector final_state;
    MeasurementRecord record;
    std::vector<double> per_layer_entropy;  // filled only when requested
};

struct TrajectoryOptions {
    // Record the half-chain entropy after each layer's measurements
    // (steady-state diagnostics). Requires even N.
    bool per_layer_entropy = false;
};

// Runs one monitored trajectory: after each layer every qubit is selected
// for measurement with probability `rate` (ascending qubit order; the site
// draw and the outcome draw consume the same seeded stream). Deterministic
// for fixed (circuit, rate, seed).
TrajectoryResult run_trajectory(const CircuitSpec& circuit, double rate, uint64_t seed,
                                const TrajectoryOptions& options = {});

// A single-occurrence angle shift, used by the parameter-shift machinery.
struct ShiftTarget {
    GateRef gate;
    double delta;
};

struct BranchReplay {
    StateVector state;          // normalized post-selection state
    double branch_probability;  // exact p_M of the forced outcome string
};

// Deterministically re-applies the circuit, forcing `outcomes` at `sites`
// (which must be in canonical order: layer ascending, qubit ascending
// within a layer). Returns nullopt when some forced outcome has (numerically)
// zero probability -- the branch does not exist. An optional single-gate
// angle shift supports the +-pi/2 rules.
std::optional<BranchReplay> replay_branch(const CircuitSpec& circuit,
                                          const std::vector<MeasurementSite>& sites,
                                          const std::vector<uint8_t>& outcomes,
                                          const std::optional<ShiftTarget>& shift = std::nullopt);

// Visits every outcome string of the fixed `sites` whose branch
// probability is nonzero, in outcome-lexicographic order (site 0 is the
// least significant bit of `outcome_bits`). Usable for M <= 24; callers
// enforce their own caps.
using BranchVisitor =
    std::function<void(uint32_t outcome_bits, const StateVector& state, double probability)>;
void for_each_branch(const CircuitSpec& circuit, const std::vector<MeasurementSite>& sites,
                     const BranchVisitor& visit,
                     const std::optional<ShiftTarget>& shift = std::nullopt);

// Sum of branch probabilities over all outcome strings (1 up to pruning of
// impossible branches).
double sum_branch_probabilities(const CircuitSpec& circuit,
                                const std::vector<MeasurementSite>& sites);

// Validates that sites are canonical and in range. Throws std::invalid_argument.
void check_sites(const CircuitSpec& circuit, const std::vector<MeasurementSite>& sites);

}  // namespace mvqc
