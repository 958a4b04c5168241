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

#include "mvqc/state_vector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mvqc {

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > 28) {
        throw std::invalid_argument("num_qubits out of range: " + std::to_string(num_qubits));
    }
    amplitudes_.assign(size_t{1} << num_qubits, cdouble{0, 0});
    amplitudes_[0] = cdouble{1, 0};
}

StateVector::StateVector(int num_qubits, std::vector<cdouble> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    if (num_qubits < 1 || amplitudes_.size() != (size_t{1} << num_qubits)) {
        throw std::invalid_argument("amplitude vector length is not 2^num_qubits");
    }
}

double StateVector::norm() const {
    long double sum = 0.0L;
    for (const cdouble& a : amplitudes_) sum += static_cast<long double>(std::norm(a));
    return static_cast<double>(std::sqrt(sum));
}

void StateVector::apply_gate(const GateOp& gate, double resolved_angle) {
    if (gate.q0 < 0 || gate.q0 >= num_qubits_) {
        throw std::out_of_range("gate qubit out of range");
    }
    if (is_rotation(gate.kind) && !std::isfinite(resolved_angle)) {
        throw std::invalid_argument("non-finite rotation angle");
    }
    if (is_two_qubit(gate.kind)) {
        if (gate.q1 < 0 || gate.q1 >= num_qubits_) {
            throw std::out_of_range("gate qubit out of range");
        }
        if (gate.q1 == gate.q0) {
            throw std::invalid_argument("two-qubit gate must address distinct sites");
        }
        switch (gate.kind) {
            case GateKind::RZZ: apply_rzz(gate.q0, gate.q1, resolved_angle); return;
            case GateKind::CNOT: apply_cnot(gate.q0, gate.q1); return;
            default:
                apply_two_qubit(gate.q0, gate.q1, two_qubit_matrix(gate.kind, resolved_angle));
                return;
        }
    }
    apply_one_qubit(gate.q0, one_qubit_matrix(gate.kind, resolved_angle));
}

void StateVector::apply_one_qubit(int q, const std::array<cdouble, 4>& m) {
    const size_t step = size_t{1} << q;
    const size_t dim = amplitudes_.size();
    cdouble* a = amplitudes_.data();
    for (size_t block = 0; block < dim; block += 2 * step) {
        for (size_t i = block; i < block + step; ++i) {
            const cdouble a0 = a[i];
            const cdouble a1 = a[i + step];
            a[i] = m[0] * a0 + m[1] * a1;
            a[i + step] = m[2] * a0 + m[3] * a1;
        }
    }
}

void StateVector::apply_two_qubit(int qa, int qb, const std::array<cdouble, 16>& m) {
    // m is indexed by s = bit(qb)*2 + bit(qa).
    const size_t ma = size_t{1} << qa;
    const size_t mb = size_t{1} << qb;
    const size_t lo = std::min(ma, mb);
    const size_t hi = std::max(ma, mb);
    const size_t dim = amplitudes_.size();
    cdouble* a = amplitudes_.data();
    for (size_t b2 = 0; b2 < dim; b2 += 2 * hi) {
        for (size_t b1 = b2; b1 < b2 + hi; b1 += 2 * lo) {
            for (size_t i = b1; i < b1 + lo; ++i) {
                const cdouble s0 = a[i];
                const cdouble s1 = a[i + ma];
                const cdouble s2 = a[i + mb];
                const cdouble s3 = a[i + ma + mb];
                a[i] = m[0] * s0 + m[1] * s1 + m[2] * s2 + m[3] * s3;
                a[i + ma] = m[4] * s0 + m[5] * s1 + m[6] * s2 + m[7] * s3;
                a[i + mb] = m[8] * s0 + m[9] * s1 + m[10] * s2 + m[11] * s3;
                a[i + ma + mb] = m[12] * s0 + m[13] * s1 + m[14] * s2 + m[15] * s3;
            }
        }
    }
}

void StateVector::apply_rzz(int qa, int qb, double angle) {
    // Diagonal: e^{-i t/2} on equal bits, e^{+i t/2} on unequal bits.
    const cdouble equal{std::cos(angle / 2.0), -std::sin(angle / 2.0)};
    const cdouble unequal = std::conj(equal);
    const size_t ma = size_t{1} << qa;
    const size_t mb = size_t{1} << qb;
    const size_t dim = amplitudes_.size();
    cdouble* a = amplitudes_.data();
    for (size_t i = 0; i < dim; ++i) {
        const bool parity = ((i & ma) != 0) != ((i & mb) != 0);
        a[i] *= parity ? unequal : equal;
    }
}

void StateVector::apply_cnot(int control, int target) {
    const size_t mc = size_t{1} << control;
    const size_t mt = size_t{1} << target;
    const size_t dim = amplitudes_.size();
    cdouble* a = amplitudes_.data();
    // Swap amplitude pairs that differ in the target bit, among control=1 states.
    for (size_t i = 0; i < dim; ++i) {
        if ((i & mc) && !(i & mt)) std::swap(a[i], a[i | mt]);
    }
}

double StateVector::probability_zero(int qubit) const {
    if (qubit < 0 || qubit >= num_qubits_) throw std::out_of_range("qubit out of range");
    const size_t mask = size_t{1} << qubit;
    long double p0 = 0.0L;
    const size_t dim = amplitudes_.size();
    for (size_t block = 0; block < dim; block += 2 * mask) {
        for (size_t i = block; i < block + mask; ++i) {
            p0 += static_cast<long double>(std::norm(amplitudes_[i]));
        }
    }
    return static_cast<double>(p0);
}

void StateVector::collapse(int qubit, int outcome, double probability) {
    const size_t mask = size_t{1} << qubit;
    const double inv = 1.0 / std::sqrt(probability);
    const size_t keep = outcome ? mask : 0;
    const size_t dim = amplitudes_.size();
    cdouble* a = amplitudes_.data();
    for (size_t i = 0; i < dim; ++i) {
        a[i] = (i & mask) == keep ? a[i] * inv : cdouble{0, 0};
    }
}

cdouble StateVector::inner_product(const StateVector& other) const {
    if (other.dim() != dim()) throw std::invalid_argument("dimension mismatch");
    cdouble sum{0, 0};
    for (size_t i = 0; i < dim(); ++i) sum += std::conj(amplitudes_[i]) * other.amplitudes_[i];
    return sum;
}

MeasurementOutcome measure_qubit(StateVector& state, int qubit, SplitMix64& rng) {
    const double p0 = state.probability_zero(qubit);
    const int outcome = rng.next_double() < p0 ? 0 : 1;
    const double p = outcome == 0 ? p0 : 1.0 - p0;
    state.collapse(qubit, outcome, p);
    return {outcome, p};
}

double force_qubit(StateVector& state, int qubit, int outcome) {
    const double p0 = state.probability_zero(qubit);
    const double p = outcome == 0 ? p0 : 1.0 - p0;
    if (p < kZeroBranchTol) return -1.0;
    state.collapse(qubit, outcome, p);
    return p;
}

}  // namespace mvqc
