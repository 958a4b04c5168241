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

#include "mvqc/trajectory.hpp"

#include <stdexcept>

#include "mvqc/entanglement.hpp"

namespace mvqc {

namespace {

double resolved_angle(const CircuitSpec& circuit, const GateOp& gate, GateRef ref,
                      const std::optional<ShiftTarget>& shift) {
    if (!is_rotation(gate.kind)) return 0.0;
    double angle = gate.param_slot >= 0 ? circuit.params[gate.param_slot] : gate.angle;
    if (shift && shift->gate == ref) angle += shift->delta;
    return angle;
}

void apply_prep(StateVector& state, const CircuitSpec& circuit,
                const std::optional<ShiftTarget>& shift) {
    for (int i = 0; i < static_cast<int>(circuit.prep.size()); ++i) {
        const GateOp& g = circuit.prep[i];
        state.apply_gate(g, resolved_angle(circuit, g, {-1, i}, shift));
    }
}

void apply_layer(StateVector& state, const CircuitSpec& circuit, int layer,
                 const std::optional<ShiftTarget>& shift) {
    const auto& gates = circuit.layers[layer];
    for (int i = 0; i < static_cast<int>(gates.size()); ++i) {
        state.apply_gate(gates[i], resolved_angle(circuit, gates[i], {layer, i}, shift));
    }
}

}  // namespace

void check_sites(const CircuitSpec& circuit, const std::vector<MeasurementSite>& sites) {
    for (size_t k = 0; k < sites.size(); ++k) {
        const MeasurementSite& s = sites[k];
        if (s.layer < 0 || s.layer >= circuit.depth) {
            throw std::invalid_argument("measurement site layer out of range");
        }
        if (s.qubit < 0 || s.qubit >= circuit.num_qubits) {
            throw std::invalid_argument("measurement site qubit out of range");
        }
        if (k > 0) {
            const MeasurementSite& prev = sites[k - 1];
            const bool ordered =
                prev.layer < s.layer || (prev.layer == s.layer && prev.qubit < s.qubit);
            if (!ordered) {
                throw std::invalid_argument(
                    "measurement sites must be strictly ordered by (layer, qubit)");
            }
        }
    }
}

TrajectoryResult run_trajectory(const CircuitSpec& circuit, double rate, uint64_t seed,
                                const TrajectoryOptions& options) {
    if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("rate must be in [0, 1]");
    SplitMix64 rng(seed);
    TrajectoryResult result{StateVector(circuit.num_qubits), {}, {}};
    result.record.rng_seed = seed;

    StateVector& state = result.final_state;
    apply_prep(state, circuit, std::nullopt);

    long double branch_prob = 1.0L;
    for (int layer = 0; layer < circuit.depth; ++layer) {
        apply_layer(state, circuit, layer, std::nullopt);
        for (int q = 0; q < circuit.num_qubits; ++q) {
            if (!rng.bernoulli(rate)) continue;
            const MeasurementOutcome out = measure_qubit(state, q, rng);
            result.record.sites.push_back({layer, q});
            result.record.outcomes.push_back(static_cast<uint8_t>(out.outcome));
            branch_prob *= static_cast<long double>(out.probability);
        }
        if (options.per_layer_entropy) {
            result.per_layer_entropy.push_back(half_chain_entropy(state));
        }
    }
    result.record.branch_probability = static_cast<double>(branch_prob);
    return result;
}

std::optional<BranchReplay> replay_branch(const CircuitSpec& circuit,
                                          const std::vector<MeasurementSite>& sites,
                                          const std::vector<uint8_t>& outcomes,
                                          const std::optional<ShiftTarget>& shift) {
    check_sites(circuit, sites);
    if (outcomes.size() != sites.size()) {
        throw std::invalid_argument("outcomes and sites differ in length");
    }

    StateVector state(circuit.num_qubits);
    apply_prep(state, circuit, shift);

    long double branch_prob = 1.0L;
    size_t next = 0;
    for (int layer = 0; layer < circuit.depth; ++layer) {
        apply_layer(state, circuit, layer, shift);
        while (next < sites.size() && sites[next].layer == layer) {
            const double p = force_qubit(state, sites[next].qubit, outcomes[next]);
            if (p < 0.0) return std::nullopt;
            branch_prob *= static_cast<long double>(p);
            ++next;
        }
    }
    return BranchReplay{std::move(state), static_cast<double>(branch_prob)};
}

namespace {

// Depth-first enumeration over outcome strings; sites must be canonical.
// Branches with a conditional probability under kZeroBranchTol are pruned.
void descend(const CircuitSpec& circuit, const std::vector<MeasurementSite>& sites,
             const std::optional<ShiftTarget>& shift, const BranchVisitor& visit,
             StateVector state, size_t k, int layers_done, uint32_t bits, long double prob) {
    if (k == sites.size()) {
        for (int layer = layers_done; layer < circuit.depth; ++layer) {
            apply_layer(state, circuit, layer, shift);
        }
        visit(bits, state, static_cast<double>(prob));
        return;
    }
    for (int layer = layers_done; layer <= sites[k].layer; ++layer) {
        apply_layer(state, circuit, layer, shift);
    }
    const int done = sites[k].layer + 1;
    const int q = sites[k].qubit;
    const double p0 = state.probability_zero(q);
    const double p1 = 1.0 - p0;
    if (p0 >= kZeroBranchTol) {
        StateVector zero = state;
        zero.collapse(q, 0, p0);
        descend(circuit, sites, shift, visit, std::move(zero), k + 1, done, bits,
                prob * static_cast<long double>(p0));
    }
    if (p1 >= kZeroBranchTol) {
        state.collapse(q, 1, p1);
        descend(circuit, sites, shift, visit, std::move(state), k + 1, done,
                bits | (uint32_t{1} << k), prob * static_cast<long double>(p1));
    }
}

}  // namespace

void for_each_branch(const CircuitSpec& circuit, const std::vector<MeasurementSite>& sites,
                     const BranchVisitor& visit, const std::optional<ShiftTarget>& shift) {
    check_sites(circuit, sites);
    if (sites.size() > 24) throw std::invalid_argument("too many sites to enumerate");
    StateVector state(circuit.num_qubits);
    apply_prep(state, circuit, shift);
    descend(circuit, sites, shift, visit, std::move(state), 0, 0, 0, 1.0L);
}

double sum_branch_probabilities(const CircuitSpec& circuit,
                                const std::vector<MeasurementSite>& sites) {
    long double sum = 0.0L;
    for_each_branch(circuit, sites,
                    [&sum](uint32_t, const StateVector&, double p) { sum += p; });
    return static_cast<double>(sum);
}

}  // namespace mvqc
