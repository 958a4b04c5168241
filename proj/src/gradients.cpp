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

#include "mvqc/gradients.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mvqc {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

std::vector<GateRef> occurrences_or_throw(const CircuitSpec& circuit, int param_index) {
    if (param_index < 0 || param_index >= circuit.num_params()) {
        throw std::invalid_argument("parameter index out of range");
    }
    std::vector<GateRef> occ = circuit.param_occurrences(param_index);
    if (occ.empty()) throw std::invalid_argument("parameter slot drives no gate");
    return occ;
}

}  // namespace

std::optional<ShiftedBranchEval> shifted_branch_expectation(
    const CircuitSpec& circuit, const std::vector<MeasurementSite>& sites,
    const std::vector<uint8_t>& outcomes, int param_index, int occurrence, double shift,
    const Observable& obs) {
    const std::vector<GateRef> occ = occurrences_or_throw(circuit, param_index);
    if (occurrence < 0 || occurrence >= static_cast<int>(occ.size())) {
        throw std::out_of_range("occurrence index out of range");
    }
    const auto replay =
        replay_branch(circuit, sites, outcomes, ShiftTarget{occ[occurrence], shift});
    if (!replay) return std::nullopt;
    return ShiftedBranchEval{expectation(replay->state, obs), replay->branch_probability};
}

BranchGradient branch_gradient(const CircuitSpec& circuit,
                               const std::vector<MeasurementSite>& sites,
                               const std::vector<uint8_t>& outcomes, int param_index,
                               const Observable& obs) {
    const std::vector<GateRef> occ = occurrences_or_throw(circuit, param_index);

    const auto base = replay_branch(circuit, sites, outcomes);
    if (!base) throw std::domain_error("branch has zero probability");
    const double p = base->branch_probability;
    const double e = expectation(base->state, obs);

    BranchGradient grad;
    grad.param_index = param_index;
    grad.outcomes = outcomes;
    grad.branch_probability = p;
    grad.expectation = e;

    double value = 0.0;
    double estimator = 0.0;
    for (size_t j = 0; j < occ.size(); ++j) {
        ShiftTermPair term{occ[j], std::nullopt, std::nullopt};
        term.plus = shifted_branch_expectation(circuit, sites, outcomes, param_index,
                                               static_cast<int>(j), kHalfPi, obs);
        term.minus = shifted_branch_expectation(circuit, sites, outcomes, param_index,
                                                static_cast<int>(j), -kHalfPi, obs);
        // Written with unnormalized weights u = p_shift * <O>_shift so a
        // vanished shifted branch contributes exactly zero. `value` recenters
        // each term on e (derivative of the normalized expectation, the
        // quantity pinned by the finite-difference oracles); `estimator`
        // keeps the terms whole, so it carries the extra e * dp/p score piece
        // that makes Born-sampled branches average to the mixed-state
        // gradient.
        double plus_u = 0.0, plus_w = 0.0;
        if (term.plus) {
            plus_w = term.plus->probability;
            plus_u = plus_w * term.plus->expectation;
        }
        double minus_u = 0.0, minus_w = 0.0;
        if (term.minus) {
            minus_w = term.minus->probability;
            minus_u = minus_w * term.minus->expectation;
        }
        value += 0.5 * ((plus_u - plus_w * e) - (minus_u - minus_w * e)) / p;
        estimator += 0.5 * (plus_u - minus_u) / p;
        grad.terms.push_back(std::move(term));
    }
    grad.value = value;
    grad.estimator = estimator;
    return grad;
}

namespace {

// sum_i p_i <O>_i over all branches of `sites`, with one occurrence of the
// slot optionally shifted.
double weighted_expectation_sum(const CircuitSpec& circuit,
                                const std::vector<MeasurementSite>& sites,
                                const Observable& obs,
                                const std::optional<ShiftTarget>& shift, int* branches = nullptr) {
    long double sum = 0.0L;
    int count = 0;
    for_each_branch(
        circuit, sites,
        [&](uint32_t, const StateVector& state, double p) {
            sum += static_cast<long double>(p) * static_cast<long double>(expectation(state, obs));
            ++count;
        },
        shift);
    if (branches) *branches = count;
    return static_cast<double>(sum);
}

}  // namespace

EnsembleGradient ensemble_gradient_exact(const CircuitSpec& circuit,
                                         const std::vector<MeasurementSite>& sites,
                                         int param_index, const Observable& obs, int cap) {
    if (static_cast<int>(sites.size()) > cap) {
        throw std::invalid_argument("too many measurement sites for exact enumeration");
    }
    const std::vector<GateRef> occ = occurrences_or_throw(circuit, param_index);

    EnsembleGradient grad;
    grad.param_index = param_index;
    grad.mode = GradientMode::Exact2M;
    grad.num_measurements = static_cast<int>(sites.size());
    weighted_expectation_sum(circuit, sites, obs, std::nullopt, &grad.num_branches);

    long double value = 0.0L;
    for (const GateRef& ref : occ) {
        const double plus =
            weighted_expectation_sum(circuit, sites, obs, ShiftTarget{ref, kHalfPi});
        const double minus =
            weighted_expectation_sum(circuit, sites, obs, ShiftTarget{ref, -kHalfPi});
        value += 0.5L * (static_cast<long double>(plus) - static_cast<long double>(minus));
    }
    grad.value = static_cast<double>(value);
    return grad;
}

double ensemble_expectation(const CircuitSpec& circuit,
                            const std::vector<MeasurementSite>& sites, int param_index,
                            double delta, const Observable& obs) {
    if (param_index < 0 || param_index >= circuit.num_params()) {
        throw std::invalid_argument("parameter index out of range");
    }
    CircuitSpec shifted = circuit;
    shifted.params[param_index] += delta;
    return weighted_expectation_sum(shifted, sites, obs, std::nullopt);
}

double finite_difference_gradient(const std::function<double(double)>& f, double x,
                                  double step) {
    if (!(step >= 1e-7 && step <= 1e-2)) {
        throw std::invalid_argument("finite-difference step outside [1e-7, 1e-2]");
    }
    return (f(x + step) - f(x - step)) / (2.0 * step);
}

double parameter_shift_gradient(const CircuitSpec& circuit, int param_index,
                                const Observable& obs) {
    const std::vector<GateRef> occ = occurrences_or_throw(circuit, param_index);
    const std::vector<MeasurementSite> no_sites;
    const std::vector<uint8_t> no_outcomes;
    double value = 0.0;
    for (size_t j = 0; j < occ.size(); ++j) {
        const auto plus = shifted_branch_expectation(circuit, no_sites, no_outcomes, param_index,
                                                     static_cast<int>(j), kHalfPi, obs);
        const auto minus = shifted_branch_expectation(circuit, no_sites, no_outcomes, param_index,
                                                      static_cast<int>(j), -kHalfPi, obs);
        value += 0.5 * (plus->expectation - minus->expectation);
    }
    return value;
}

double gradient_sample(CircuitFamily family, int num_qubits, int depth, double rate,
                       uint64_t sample_seed, const Observable& obs, int param_index,
                       bool hea_cnot_wrap) {
    SplitMix64 param_rng(derive_seed(sample_seed, 0));
    const CircuitSpec circuit =
        build_random_circuit(family, num_qubits, depth, param_rng, hea_cnot_wrap);
    const TrajectoryResult traj = run_trajectory(circuit, rate, derive_seed(sample_seed, 1));
    return branch_gradient(circuit, traj.record.sites, traj.record.outcomes, param_index, obs)
        .estimator;
}

double sample_variance(const std::vector<double>& values) {
    const size_t n = values.size();
    if (n < 2) throw std::invalid_argument("sample variance needs at least two values");
    long double mean = 0.0L;
    for (double v : values) mean += v;
    mean /= static_cast<long double>(n);
    long double ss = 0.0L;
    for (double v : values) {
        const long double d = static_cast<long double>(v) - mean;
        ss += d * d;
    }
    return static_cast<double>(ss / static_cast<long double>(n - 1));
}

VarianceEstimate gradient_variance_experiment(CircuitFamily family, int num_qubits, int depth,
                                              double rate, int num_samples,
                                              uint64_t base_seed, const Observable& obs,
                                              int param_index,
                                              const GradientVarianceOptions& options) {
    if (num_samples < 2) throw std::invalid_argument("need at least two samples");

    std::vector<double> grads(num_samples);
    for (int k = 0; k < num_samples; ++k) {
        grads[k] = gradient_sample(family, num_qubits, depth, rate,
                                   derive_seed(base_seed, static_cast<uint64_t>(k)), obs,
                                   param_index, options.hea_cnot_wrap);
    }

    VarianceEstimate est;
    est.num_samples = num_samples;
    est.variance = sample_variance(grads);

    const int boots = options.bootstrap_resamples;
    if (boots > 1) {
        std::vector<double> boot_vars(boots);
        std::vector<double> resample(num_samples);
        for (int b = 0; b < boots; ++b) {
            SplitMix64 brng(derive_seed(base_seed, (uint64_t{1} << 32) + b));
            for (int k = 0; k < num_samples; ++k) {
                resample[k] = grads[brng.next_u64() % num_samples];
            }
            boot_vars[b] = sample_variance(resample);
        }
        est.std_error = std::sqrt(sample_variance(boot_vars));
    }
    return est;
}

}  // namespace mvqc
