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

#include "mvqc/circuit.hpp"

#include <stdexcept>
#include <string>

namespace mvqc {

const char* family_name(CircuitFamily family) {
    switch (family) {
        case CircuitFamily::XxzHva: return "xxz_hva";
        case CircuitFamily::Hea: return "hea";
    }
    throw std::invalid_argument("unknown circuit family");
}

CircuitFamily family_from_name(const std::string& name) {
    if (name == "xxz_hva") return CircuitFamily::XxzHva;
    if (name == "hea") return CircuitFamily::Hea;
    throw std::invalid_argument("unknown circuit family: " + name);
}

std::vector<GateRef> CircuitSpec::param_occurrences(int param_slot) const {
    std::vector<GateRef> refs;
    for (int l = 0; l < static_cast<int>(layers.size()); ++l) {
        const auto& layer = layers[l];
        for (int i = 0; i < static_cast<int>(layer.size()); ++i) {
            if (layer[i].param_slot == param_slot) refs.push_back({l, i});
        }
    }
    return refs;
}

int param_count(CircuitFamily family, int num_qubits, int depth) {
    switch (family) {
        case CircuitFamily::XxzHva: return 4 * depth;
        case CircuitFamily::Hea: return 2 * num_qubits * depth;
    }
    throw std::invalid_argument("unknown circuit family");
}

CircuitSpec build_xxz_hva(int num_qubits, int depth, std::vector<double> params) {
    if (num_qubits < 2 || num_qubits % 2 != 0) {
        throw std::invalid_argument("xxz_hva requires an even number of qubits >= 2");
    }
    if (depth < 0) throw std::invalid_argument("negative depth");
    if (static_cast<int>(params.size()) != 4 * depth) {
        throw std::invalid_argument("xxz_hva expects 4 * depth parameters");
    }

    CircuitSpec spec;
    spec.family = CircuitFamily::XxzHva;
    spec.num_qubits = num_qubits;
    spec.depth = depth;
    spec.params = std::move(params);

    // Singlet (|01> - |10>)/sqrt(2) on each even bond: the ground state of
    // the even-bond XXZ terms and an S^z = 0 state. The layer unitaries
    // (ZZ, and YY+XX at a shared angle) conserve total magnetization, so
    // the whole evolution stays in the zero-magnetization sector; starting
    // from (|00> + |11>)/sqrt(2) instead would break that structure and
    // shift the entanglement transition.
    constexpr double kPi = 3.14159265358979323846;
    for (int k = 0; k + 1 < num_qubits; k += 2) {
        spec.prep.push_back({GateKind::RY, k, -1, kPi / 2.0, -1});
        spec.prep.push_back(GateOp::cnot(k, k + 1));
        spec.prep.push_back({GateKind::RY, k, -1, kPi, -1});
    }

    const int half = num_qubits / 2;
    spec.layers.resize(depth);
    for (int d = 0; d < depth; ++d) {
        auto& layer = spec.layers[d];
        const int theta = 4 * d;
        const int phi = 4 * d + 1;
        const int beta = 4 * d + 2;
        const int gamma = 4 * d + 3;
        for (int k = 0; k < half; ++k) {
            const int a = 2 * k + 1;
            const int b = (2 * k + 2) % num_qubits;
            layer.push_back(GateOp::rzz(a, b, theta));
        }
        for (int k = 0; k < half; ++k) {
            const int a = 2 * k + 1;
            const int b = (2 * k + 2) % num_qubits;
            layer.push_back(GateOp::ryy(a, b, phi));
        }
        for (int k = 0; k < half; ++k) {
            const int a = 2 * k + 1;
            const int b = (2 * k + 2) % num_qubits;
            layer.push_back(GateOp::rxx(a, b, phi));
        }
        for (int k = 0; k < half; ++k) layer.push_back(GateOp::rzz(2 * k, 2 * k + 1, beta));
        for (int k = 0; k < half; ++k) layer.push_back(GateOp::ryy(2 * k, 2 * k + 1, gamma));
        for (int k = 0; k < half; ++k) layer.push_back(GateOp::rxx(2 * k, 2 * k + 1, gamma));
    }
    return spec;
}

CircuitSpec build_hea(int num_qubits, int depth, std::vector<double> params, bool cnot_wrap) {
    if (num_qubits < 2) throw std::invalid_argument("hea requires at least 2 qubits");
    if (depth < 0) throw std::invalid_argument("negative depth");
    if (static_cast<int>(params.size()) != 2 * num_qubits * depth) {
        throw std::invalid_argument("hea expects 2 * num_qubits * depth parameters");
    }

    CircuitSpec spec;
    spec.family = CircuitFamily::Hea;
    spec.num_qubits = num_qubits;
    spec.depth = depth;
    spec.params = std::move(params);

    for (int q = 0; q < num_qubits; ++q) spec.prep.push_back(GateOp::hadamard(q));

    spec.layers.resize(depth);
    for (int l = 0; l < depth; ++l) {
        auto& layer = spec.layers[l];
        const int base = 2 * num_qubits * l;
        for (int q = 0; q < num_qubits; ++q) layer.push_back(GateOp::ry(q, base + q));
        for (int q = 0; q + 1 < num_qubits; ++q) layer.push_back(GateOp::cnot(q, q + 1));
        if (cnot_wrap) layer.push_back(GateOp::cnot(num_qubits - 1, 0));
        for (int q = 0; q < num_qubits; ++q) layer.push_back(GateOp::rx(q, base + num_qubits + q));
    }
    return spec;
}

CircuitSpec build_random_circuit(CircuitFamily family, int num_qubits, int depth,
                                 SplitMix64& rng, bool hea_cnot_wrap) {
    const int count = param_count(family, num_qubits, depth);
    std::vector<double> params(count);
    for (double& p : params) p = rng.next_angle();
    if (family == CircuitFamily::XxzHva) return build_xxz_hva(num_qubits, depth, std::move(params));
    return build_hea(num_qubits, depth, std::move(params), hea_cnot_wrap);
}

}  // namespace mvqc
