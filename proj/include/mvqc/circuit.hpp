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

#include <string>
#include <vector>

#include "mvqc/gates.hpp"
#include "mvqc/rng.hpp"

namespace mvqc {

enum class CircuitFamily { XxzHva, Hea };

const char* family_name(CircuitFamily family);
CircuitFamily family_from_name(const std::string& name);  // "xxz_hva" | "hea"

// Position of a gate inside a CircuitSpec. layer == -1 addresses the state
// preparation block.
struct GateRef {
    int layer;
    int index;
    bool operator==(const GateRef&) const = default;
};

// One circuit-family instance: state preparation followed by `depth`
// layers, with a flat angle vector bound through GateOp::param_slot.
// Immutable after construction (shared read-only across worker threads).
struct CircuitSpec {
    CircuitFamily family;
    int num_qubits = 0;
    int depth = 0;
    std::vector<GateOp> prep;
    std::vector<std::vector<GateOp>> layers;
    std::vector<double> params;

    int num_params() const { return static_cast<int>(params.size()); }
    const GateOp& gate(GateRef ref) const {
        return ref.layer < 0 ? prep[ref.index] : layers[ref.layer][ref.index];
    }

    // All gates bound to a parameter slot, in application order. The
    // gradient of a shared slot is the sum over these occurrences.
    std::vector<GateRef> param_occurrences(int param_slot) const;
};

// XXZ-chain Hamiltonian variational ansatz on a periodic chain of even N.
// Preparation puts a Bell pair (the singlet) on every even bond
// (0,1),(2,3),...; each layer applies ZZ(theta_d), YY(phi_d), XX(phi_d)
// across the odd bonds (1,2),(3,4),...,(N-1,0), then ZZ(beta_d),
// YY(gamma_d), XX(gamma_d) across the even bonds. Layer d owns parameter
// slots 4d..4d+3 in the order (theta, phi, beta, gamma); the YY and XX
// rotations of a sub-layer share one slot, which keeps the circuit inside
// the zero-magnetization sector of the singlet start. params.size() must
// equal 4 * depth.
CircuitSpec build_xxz_hva(int num_qubits, int depth, std::vector<double> params);

// Hardware-efficient ansatz: H on every qubit, then per layer a column of
// RY rotations, a CNOT chain (control i, target i+1, ascending, plus the
// wrap-around CNOT (N-1, 0) when cnot_wrap is set), and a column of RX
// rotations. Layer l owns slots 2N*l..2N*l+N-1 for the RY angles and
// 2N*l+N..2N*(l+1)-1 for the RX angles. params.size() must equal
// 2 * N * depth.
CircuitSpec build_hea(int num_qubits, int depth, std::vector<double> params,
                      bool cnot_wrap = true);

// Number of parameters the family expects for one instance.
int param_count(CircuitFamily family, int num_qubits, int depth);

// Builds either family from uniformly sampled angles in [0, 2*pi).
CircuitSpec build_random_circuit(CircuitFamily family, int num_qubits, int depth,
                                 SplitMix64& rng, bool hea_cnot_wrap = true);

}  // namespace mvqc
