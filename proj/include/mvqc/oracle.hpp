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

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "mvqc/circuit.hpp"
#include "mvqc/observable.hpp"
#include "mvqc/trajectory.hpp"

// Reference implementations used only to cross-check the fast simulation
// path. Everything here works on explicit 2^N x 2^N matrices built from
// first principles (generator embedding and exp(-i(theta/2)A) =
// cos(theta/2) I - i sin(theta/2) A for A^2 = I); no code is shared with
// the strided statevector kernels. Guarded to N <= 10.

namespace mvqc::oracle {

// Single-qubit operator embedded into the full Hilbert space.
Eigen::MatrixXcd embed_one_qubit(const Eigen::Matrix2cd& op, int qubit, int num_qubits);

// Full-space Pauli X/Y/Z on one qubit.
Eigen::MatrixXcd pauli_full(Pauli axis, int qubit, int num_qubits);

// Full-space unitary of one gate at a resolved angle.
Eigen::MatrixXcd gate_matrix(const GateOp& gate, double angle, int num_qubits);

// Full-space Hermitian matrix of a Pauli-string observable.
Eigen::MatrixXcd observable_matrix(const Observable& obs, int num_qubits);

// Projector onto `outcome` of one qubit.
Eigen::MatrixXcd projector(int qubit, int outcome, int num_qubits);

struct DenseBranch {
    bool exists = false;      // false when the forced branch has ~zero weight
    double probability = 0.0; // p_M = <psi~|psi~> of the unnormalized state
    double expectation = 0.0; // <psi~|O|psi~> / p_M
};

// Forced-outcome branch evaluation through explicit matrix products: the
// state is carried unnormalized (projectors applied without renormalizing)
// so p_M falls out as the final squared norm.
DenseBranch dense_branch(const CircuitSpec& circuit, const std::vector<MeasurementSite>& sites,
                         const std::vector<uint8_t>& outcomes, const Observable& obs,
                         const std::optional<ShiftTarget>& shift = std::nullopt);

// Measurement-averaged expectation Tr(rho O) where rho evolves as a
// density matrix: unitaries conjugate, each measurement site applies the
// dephasing channel rho -> P0 rho P0 + P1 rho P1. `delta` shifts the whole
// parameter slot. Finite differences of this function in delta are the
// ensemble-gradient oracle.
double channel_expectation(const CircuitSpec& circuit, const std::vector<MeasurementSite>& sites,
                           const Observable& obs, int param_index, double delta);

// Entropy of `subsystem` via the full outer product |psi><psi| and an
// explicit partial-trace double loop (independent of the Gram-matrix path).
double entropy_from_full_density(const StateVector& state, const std::vector<int>& subsystem);

}  // namespace mvqc::oracle
