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

#include <complex>
#include <cstdint>
#include <vector>

#include "mvqc/gates.hpp"
#include "mvqc/rng.hpp"

namespace mvqc {

// Dense statevector over 2^N amplitudes. Qubit q owns bit q of the basis
// index (little-endian). Dense storage is deliberate: the circuits are
// non-Clifford and the gradient rules need exact branch probabilities, so
// there is no stabilizer or tensor-network shortcut; the practical ceiling
// is N around 20.
class StateVector {
  public:
    // |0...0> on num_qubits qubits.
    explicit StateVector(int num_qubits);

    // Takes ownership of an amplitude vector; length must be 2^num_qubits.
    StateVector(int num_qubits, std::vector<cdouble> amplitudes);

    int num_qubits() const { return num_qubits_; }
    size_t dim() const { return amplitudes_.size(); }
    const std::vector<cdouble>& amplitudes() const { return amplitudes_; }
    cdouble amplitude(size_t basis_index) const { return amplitudes_[basis_index]; }

    double norm() const;

    // Applies a unitary gate in place. Norm is preserved to within 1e-10.
    void apply_gate(const GateOp& gate, double resolved_angle);

    // Overload for unparameterized gates (uses gate.angle).
    void apply_gate(const GateOp& gate) { apply_gate(gate, gate.angle); }

    // Probability that measuring `qubit` in the sigma^z basis yields 0.
    double probability_zero(int qubit) const;

    // Projects onto `outcome` at `qubit` and renormalizes. `probability`
    // must be the Born probability of that outcome (caller supplies it so
    // the trajectory can record the exact conditional weight).
    void collapse(int qubit, int outcome, double probability);

    cdouble inner_product(const StateVector& other) const;

  private:
    void apply_one_qubit(int q, const std::array<cdouble, 4>& m);
    void apply_two_qubit(int qa, int qb, const std::array<cdouble, 16>& m);
    void apply_rzz(int qa, int qb, double angle);
    void apply_cnot(int control, int target);

    int num_qubits_;
    std::vector<cdouble> amplitudes_;
};

struct MeasurementOutcome {
    int outcome;         // 0 or 1
    double probability;  // conditional Born probability of that outcome
};

// Born-samples a sigma^z measurement of `qubit`, collapsing the state.
MeasurementOutcome measure_qubit(StateVector& state, int qubit, SplitMix64& rng);

// Forces a specific outcome. Returns the conditional probability, or a
// negative value if that outcome's probability is below 1e-14 (an
// inconsistent branch; the state is left unspecified in that case).
double force_qubit(StateVector& state, int qubit, int outcome);

// Conditional probabilities this small are treated as an impossible branch.
inline constexpr double kZeroBranchTol = 1e-14;

}  // namespace mvqc
