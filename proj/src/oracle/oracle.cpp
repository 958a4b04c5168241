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

#include "mvqc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mvqc::oracle {

namespace {

constexpr int kMaxQubits = 10;

void check_size(int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("oracle supports 1..10 qubits");
    }
}

Eigen::Matrix2cd pauli2(Pauli axis) {
    Eigen::Matrix2cd m;
    const std::complex<double> i{0.0, 1.0};
    switch (axis) {
        case Pauli::X: m << 0, 1, 1, 0; break;
        case Pauli::Y: m << 0, -i, i, 0; break;
        case Pauli::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

double resolved_angle(const CircuitSpec& circuit, const GateOp& gate, GateRef ref,
                      const std::optional<ShiftTarget>& shift) {
    if (!is_rotation(gate.kind)) return 0.0;
    double angle = gate.param_slot >= 0 ? circuit.params[gate.param_slot] : gate.angle;
    if (shift && shift->gate == ref) angle += shift->delta;
    return angle;
}

// Product of two single-qubit operators on distinct qubits, embedded in
// the full space. Entry-wise Kronecker fill; avoids the dim^3 product of
// two embedded matrices.
Eigen::MatrixXcd embed_pair(const Eigen::Matrix2cd& op_a, int qubit_a,
                            const Eigen::Matrix2cd& op_b, int qubit_b, int num_qubits) {
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    const Eigen::Index mask_a = Eigen::Index{1} << qubit_a;
    const Eigen::Index mask_b = Eigen::Index{1} << qubit_b;
    const Eigen::Index rest = ~(mask_a | mask_b);
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index row = 0; row < dim; ++row) {
        for (Eigen::Index col = 0; col < dim; ++col) {
            if ((row & rest) != (col & rest)) continue;
            full(row, col) = op_a((row & mask_a) ? 1 : 0, (col & mask_a) ? 1 : 0) *
                             op_b((row & mask_b) ? 1 : 0, (col & mask_b) ? 1 : 0);
        }
    }
    return full;
}

}  // namespace

Eigen::MatrixXcd embed_one_qubit(const Eigen::Matrix2cd& op, int qubit, int num_qubits) {
    check_size(num_qubits);
    if (qubit < 0 || qubit >= num_qubits) throw std::out_of_range("qubit out of range");
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim, dim);
    const Eigen::Index mask = Eigen::Index{1} << qubit;
    for (Eigen::Index row = 0; row < dim; ++row) {
        for (Eigen::Index col = 0; col < dim; ++col) {
            if ((row & ~mask) != (col & ~mask)) continue;
            full(row, col) = op((row & mask) ? 1 : 0, (col & mask) ? 1 : 0);
        }
    }
    return full;
}

Eigen::MatrixXcd pauli_full(Pauli axis, int qubit, int num_qubits) {
    return embed_one_qubit(pauli2(axis), qubit, num_qubits);
}

Eigen::MatrixXcd gate_matrix(const GateOp& gate, double angle, int num_qubits) {
    check_size(num_qubits);
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(dim, dim);
    const std::complex<double> mi{0.0, -1.0};
    switch (gate.kind) {
        case GateKind::RX:
        case GateKind::RY: {
            const Pauli axis = gate.kind == GateKind::RX ? Pauli::X : Pauli::Y;
            const Eigen::MatrixXcd a = pauli_full(axis, gate.q0, num_qubits);
            return std::cos(angle / 2) * identity + mi * std::sin(angle / 2) * a;
        }
        case GateKind::RZZ:
        case GateKind::RYY:
        case GateKind::RXX: {
            Pauli axis = Pauli::Z;
            if (gate.kind == GateKind::RYY) axis = Pauli::Y;
            if (gate.kind == GateKind::RXX) axis = Pauli::X;
            const Eigen::MatrixXcd a =
                embed_pair(pauli2(axis), gate.q0, pauli2(axis), gate.q1, num_qubits);
            return std::cos(angle / 2) * identity + mi * std::sin(angle / 2) * a;
        }
        case GateKind::H: {
            Eigen::Matrix2cd h;
            h << 1, 1, 1, -1;
            h /= std::sqrt(2.0);
            return embed_one_qubit(h, gate.q0, num_qubits);
        }
        case GateKind::CNOT: {
            // |0><0|_c I + |1><1|_c X_t
            Eigen::Matrix2cd p1 = Eigen::Matrix2cd::Zero();
            p1(1, 1) = 1.0;
            return projector(gate.q0, 0, num_qubits) +
                   embed_pair(p1, gate.q0, pauli2(Pauli::X), gate.q1, num_qubits);
        }
    }
    throw std::invalid_argument("unknown gate kind");
}

Eigen::MatrixXcd observable_matrix(const Observable& obs, int num_qubits) {
    check_size(num_qubits);
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(dim, dim);
    for (const PauliTerm& term : obs.terms) {
        Eigen::Index mask = 0;
        bool distinct = true;
        for (const PauliFactor& f : term.factors) {
            const Eigen::Index bit = Eigen::Index{1} << f.qubit;
            distinct = distinct && !(mask & bit);
            mask |= bit;
        }
        if (distinct) {
            // String of Paulis on distinct qubits: entry-wise fill.
            for (Eigen::Index row = 0; row < dim; ++row) {
                for (Eigen::Index col = 0; col < dim; ++col) {
                    if ((row & ~mask) != (col & ~mask)) continue;
                    std::complex<double> v = term.coefficient;
                    for (const PauliFactor& f : term.factors) {
                        v *= pauli2(f.axis)((row >> f.qubit) & 1, (col >> f.qubit) & 1);
                    }
                    total(row, col) += v;
                }
            }
        } else {
            Eigen::MatrixXcd factor = Eigen::MatrixXcd::Identity(dim, dim);
            for (const PauliFactor& f : term.factors) {
                factor = factor * pauli_full(f.axis, f.qubit, num_qubits);
            }
            total += term.coefficient * factor;
        }
    }
    return total;
}

Eigen::MatrixXcd projector(int qubit, int outcome, int num_qubits) {
    Eigen::Matrix2cd p = Eigen::Matrix2cd::Zero();
    p(outcome, outcome) = 1.0;
    return embed_one_qubit(p, qubit, num_qubits);
}

DenseBranch dense_branch(const CircuitSpec& circuit, const std::vector<MeasurementSite>& sites,
                         const std::vector<uint8_t>& outcomes, const Observable& obs,
                         const std::optional<ShiftTarget>& shift) {
    check_size(circuit.num_qubits);
    if (sites.size() != outcomes.size()) {
        throw std::invalid_argument("outcomes and sites differ in length");
    }
    const Eigen::Index dim = Eigen::Index{1} << circuit.num_qubits;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(0) = 1.0;

    for (int i = 0; i < static_cast<int>(circuit.prep.size()); ++i) {
        const GateOp& g = circuit.prep[i];
        psi = gate_matrix(g, resolved_angle(circuit, g, {-1, i}, shift), circuit.num_qubits) * psi;
    }
    size_t next = 0;
    for (int layer = 0; layer < circuit.depth; ++layer) {
        const auto& gates = circuit.layers[layer];
        for (int i = 0; i < static_cast<int>(gates.size()); ++i) {
            psi = gate_matrix(gates[i], resolved_angle(circuit, gates[i], {layer, i}, shift),
                              circuit.num_qubits) *
                  psi;
        }
        while (next < sites.size() && sites[next].layer == layer) {
            psi = projector(sites[next].qubit, outcomes[next], circuit.num_qubits) * psi;
            ++next;
        }
    }

    DenseBranch result;
    result.probability = psi.squaredNorm();
    if (result.probability < kZeroBranchTol) return result;
    result.exists = true;
    const Eigen::MatrixXcd o = observable_matrix(obs, circuit.num_qubits);
    result.expectation = (psi.adjoint() * o * psi)(0).real() / result.probability;
    return result;
}

double channel_expectation(const CircuitSpec& circuit, const std::vector<MeasurementSite>& sites,
                           const Observable& obs, int param_index, double delta) {
    check_size(circuit.num_qubits);
    if (param_index < 0 || param_index >= circuit.num_params()) {
        throw std::invalid_argument("parameter index out of range");
    }
    CircuitSpec shifted = circuit;
    shifted.params[param_index] += delta;

    const Eigen::Index dim = Eigen::Index{1} << circuit.num_qubits;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    rho(0, 0) = 1.0;

    auto conjugate = [&](const GateOp& g, GateRef ref) {
        const Eigen::MatrixXcd u =
            gate_matrix(g, resolved_angle(shifted, g, ref, std::nullopt), circuit.num_qubits);
        rho = u * rho * u.adjoint();
    };
    for (int i = 0; i < static_cast<int>(shifted.prep.size()); ++i) {
        conjugate(shifted.prep[i], {-1, i});
    }
    size_t next = 0;
    for (int layer = 0; layer < shifted.depth; ++layer) {
        const auto& gates = shifted.layers[layer];
        for (int i = 0; i < static_cast<int>(gates.size()); ++i) conjugate(gates[i], {layer, i});
        while (next < sites.size() && sites[next].layer == layer) {
            const Eigen::MatrixXcd p0 = projector(sites[next].qubit, 0, circuit.num_qubits);
            const Eigen::MatrixXcd p1 = projector(sites[next].qubit, 1, circuit.num_qubits);
            rho = p0 * rho * p0 + p1 * rho * p1;
            ++next;
        }
    }
    return (observable_matrix(obs, circuit.num_qubits) * rho).trace().real();
}

double entropy_from_full_density(const StateVector& state, const std::vector<int>& subsystem) {
    check_size(state.num_qubits());
    const int n = state.num_qubits();
    std::vector<int> a = subsystem;
    std::sort(a.begin(), a.end());
    const Eigen::Index dim = Eigen::Index{1} << n;
    const Eigen::Index dim_a = Eigen::Index{1} << a.size();

    Eigen::MatrixXcd rho_full(dim, dim);
    const auto& amp = state.amplitudes();
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            rho_full(r, c) = amp[r] * std::conj(amp[c]);
        }
    }

    auto sub_bits = [&](Eigen::Index i) {
        Eigen::Index r = 0;
        for (size_t k = 0; k < a.size(); ++k) r |= ((i >> a[k]) & 1) << k;
        return r;
    };
    std::vector<int> rest;
    for (int q = 0; q < n; ++q) {
        if (!std::binary_search(a.begin(), a.end(), q)) rest.push_back(q);
    }
    auto rest_bits = [&](Eigen::Index i) {
        Eigen::Index r = 0;
        for (size_t k = 0; k < rest.size(); ++k) r |= ((i >> rest[k]) & 1) << k;
        return r;
    };

    Eigen::MatrixXcd rho_a = Eigen::MatrixXcd::Zero(dim_a, dim_a);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            if (rest_bits(r) != rest_bits(c)) continue;
            rho_a(sub_bits(r), sub_bits(c)) += rho_full(r, c);
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_a, Eigen::EigenvaluesOnly);
    double entropy = 0.0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        const double lambda = solver.eigenvalues()[k];
        if (lambda > 1e-12) entropy -= lambda * std::log(lambda);
    }
    return entropy;
}

}  // namespace mvqc::oracle
