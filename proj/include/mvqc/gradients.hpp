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

#include "mvqc/observable.hpp"
#include "mvqc/trajectory.hpp"

namespace mvqc {

// Gradients of observable expectations through circuits that contain
// intermediate projective measurements.
//
// For a fixed outcome branch with unshifted weight p and normalized-branch
// expectation <O>, shifting one occurrence of parameter l by +-pi/2 gives
// shifted weights p+- and expectations <O>+-, and
//
//   d/dtheta_l <O>_branch
//     = 1/2 * [ (<O>+ - <O>) * p+/p  -  (<O>- - <O>) * p-/p ],
//
// summed over all gate occurrences of slot l. The sign of the <O>
// correction term follows from d(p^-1)/dtheta = -p^-2 dp/dtheta and is
// pinned by the finite-difference oracles in the test suite (the
// gradcheck harness carries a deliberate sign-flip hook as a negative
// control).
//
// The measurement-averaged (mixed-state) gradient is the branch sum
//
//   d/dtheta_l Tr(rho O) = sum_i 1/2 * ( <O>_i+ p_i+  -  <O>_i- p_i- ),
//
// i.e. each branch's unnormalized shift-rule term; the 1/p_i weights of the
// per-branch rule cancel against the p_i mixture weights.

// Expectation and weight of one branch in a (possibly shifted) circuit.
struct ShiftedBranchEval {
    double expectation;  // <O> on the normalized branch state
    double probability;  // branch weight in that circuit
};

// Replays `outcomes` at `sites` with one occurrence of `param_index`
// shifted by `shift` (0 reproduces the unshifted branch). Returns nullopt
// when the branch has zero probability under the shift; its weighted
// contribution to any gradient is then zero.
std::optional<ShiftedBranchEval> shifted_branch_expectation(
    const CircuitSpec& circuit, const std::vector<MeasurementSite>& sites,
    const std::vector<uint8_t>& outcomes, int param_index, int occurrence, double shift,
    const Observable& obs);

// Per-occurrence +-pi/2 data backing one branch gradient.
struct ShiftTermPair {
    GateRef gate;
    std::optional<ShiftedBranchEval> plus;   // nullopt when the shifted branch vanishes
    std::optional<ShiftedBranchEval> minus;
};

struct BranchGradient {
    double value = 0.0;      // d/dtheta_l of the normalized branch expectation
    double estimator = 0.0;  // single-branch term of the mixed-state gradient
    int param_index = -1;
    std::vector<uint8_t> outcomes;
    double branch_probability = 0.0;  // unshifted p_M
    double expectation = 0.0;         // unshifted normalized <O>
    std::vector<ShiftTermPair> terms; // one entry per gate occurrence of the slot
};

// Shift-rule gradient data for one outcome branch. `value` differentiates
// the branch's own normalized expectation; `estimator` is the same shift
// data left unnormalized, sum_occ (E+ p+/p - E- p-/p)/2, whose Born-weighted
// average over branches equals the mixed-state gradient (the 1/p cancels
// the mixture weight). The two coincide when no sites are measured. Throws
// std::invalid_argument for an unparameterized slot and std::domain_error
// when the unshifted branch has zero probability.
BranchGradient branch_gradient(const CircuitSpec& circuit,
                               const std::vector<MeasurementSite>& sites,
                               const std::vector<uint8_t>& outcomes, int param_index,
                               const Observable& obs);

enum class GradientMode { Exact2M, Sampled };

struct EnsembleGradient {
    double value = 0.0;
    int param_index = -1;
    GradientMode mode = GradientMode::Exact2M;
    int num_measurements = 0;
    int num_branches = 0;  // branches with nonzero unshifted probability
};

inline constexpr int kExactEnumerationCap = 14;

// Mixed-state gradient d/dtheta_l Tr(rho O) with rho the Born-weighted
// mixture over all 2^M outcome strings of the fixed `sites`. Enumerates
// every branch exactly; refuses M beyond `cap` (callers with larger M
// should Monte-Carlo branches via branch_gradient instead).
EnsembleGradient ensemble_gradient_exact(const CircuitSpec& circuit,
                                         const std::vector<MeasurementSite>& sites,
                                         int param_index, const Observable& obs,
                                         int cap = kExactEnumerationCap);

// Exactly enumerated branch-averaged expectation sum_i p_i <O>_i with one
// occurrence-wide slot shift `delta` applied to `param_index` (the
// quantity whose theta_l-derivative ensemble_gradient_exact computes).
double ensemble_expectation(const CircuitSpec& circuit,
                            const std::vector<MeasurementSite>& sites, int param_index,
                            double delta, const Observable& obs);

// Central difference (f(x+h) - f(x-h)) / 2h; step must lie in [1e-7, 1e-2].
double finite_difference_gradient(const std::function<double(double)>& f, double x,
                                  double step = 1e-5);

// Textbook parameter-shift gradient of the unmeasured circuit (sum of
// +-pi/2 shift terms over the slot's occurrences); the M = 0 reduction
// target for both projective rules.
double parameter_shift_gradient(const CircuitSpec& circuit, int param_index,
                                const Observable& obs);

// One realization of the variance experiment: builds the sample_seed-derived
// random instance (uniform angles), runs one monitored trajectory at `rate`,
// and returns the branch's mixed-state gradient estimator with exact weights.
double gradient_sample(CircuitFamily family, int num_qubits, int depth, double rate,
                       uint64_t sample_seed, const Observable& obs, int param_index = 0,
                       bool hea_cnot_wrap = true);

// Unbiased (n - 1) sample variance; requires n >= 2.
double sample_variance(const std::vector<double>& values);

struct VarianceEstimate {
    double variance = 0.0;
    double std_error = 0.0;  // bootstrap standard error of the variance
    int num_samples = 0;
};

struct GradientVarianceOptions {
    int bootstrap_resamples = 200;
    bool hea_cnot_wrap = true;
};

// Samples `num_samples` random circuit realizations: uniform parameters,
// measurement sites drawn with probability `rate`, one Born-sampled
// outcome branch, and that branch's gradient estimator for `param_index`
// (first parameter by default). Branch weights are exact; only the branch
// choice is Monte Carlo. Fully deterministic for a fixed base seed.
VarianceEstimate gradient_variance_experiment(CircuitFamily family, int num_qubits, int depth,
                                              double rate, int num_samples,
                                              uint64_t base_seed, const Observable& obs,
                                              int param_index = 0,
                                              const GradientVarianceOptions& options = {});

}  // namespace mvqc
