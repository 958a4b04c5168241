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
#include <vector>

#include "mvqc/state_vector.hpp"

namespace mvqc {

// All entropies are in nats (natural logarithm). The collapse fits and
// critical exponents are base-invariant; table output can be converted to
// bits at the CLI layer.

// Reduced density matrix rho_A of the qubits in `subsystem` (distinct,
// in range, non-empty, strictly smaller than the whole system; at most 12
// qubits as a memory guard). Row/column bit k of the result corresponds to
// the k-th smallest qubit index in `subsystem`.
Eigen::MatrixXcd reduced_density_matrix(const StateVector& state,
                                        const std::vector<int>& subsystem);

// Von Neumann entropy -sum lambda ln lambda of rho_A. Eigenvalues below
// 1e-12 contribute zero (guards numerically negative eigenvalues).
double von_neumann_entropy(const StateVector& state, const std::vector<int>& subsystem);

// Entropy of the canonical contiguous half A = {0,...,N/2-1}. Requires even N.
double half_chain_entropy(const StateVector& state);

// Two-site quantum mutual information I(a,b) = S({a}) + S({b}) - S({a,b}),
// clamped to >= 0. Requires a != b.
double mutual_information(const StateVector& state, int qubit_a, int qubit_b);

}  // namespace mvqc
