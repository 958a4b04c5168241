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

#include "mvqc/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mvqc {

namespace {

std::vector<int> sorted_subsystem(const StateVector& state, const std::vector<int>& subsystem) {
    const int n = state.num_qubits();
    if (subsystem.empty() || static_cast<int>(subsystem.size()) >= n) {
        throw std::invalid_argument("subsystem must be a proper non-empty subset");
    }
    if (subsystem.size() > 12) {
        throw std::invalid_argument("subsystem too large for a dense reduced density matrix");
    }
    std::vector<int> a = subsystem;
    std::sort(a.begin(), a.end());
    if (a.front() < 0 || a.back() >= n) throw std::out_of_range("subsystem qubit out of range");
    if (std::adjacent_find(a.begin(), a.end()) != a.end()) {
        throw std::invalid_argument("subsystem qubits must be distinct");
    }
    return a;
}

}  // namespace

Eigen::MatrixXcd reduced_density_matrix(const StateVector& state,
                                        const std::vector<int>& subsystem) {
    const std::vector<int> a = sorted_subsystem(state, subsystem);
    const int n = state.num_qubits();
    std::vector<int> b;
    for (int q = 0, k = 0; q < n; ++q) {
        if (k < static_cast<int>(a.size()) && a[k] == q) {
            ++k;
        } else {
            b.push_back(q);
        }
    }

    const Eigen::Index dim_a = Eigen::Index{1} << a.size();
    const Eigen::Index dim_b = Eigen::Index{1} << b.size();
    Eigen::MatrixXcd m(dim_a, dim_b);
    const auto& amp = state.amplitudes();
    for (size_t i = 0; i < amp.size(); ++i) {
        size_t row = 0;
        for (size_t k = 0; k < a.size(); ++k) row |= ((i >> a[k]) & 1) << k;
        size_t col = 0;
        for (size_t k = 0; k < b.size(); ++k) col |= ((i >> b[k]) & 1) << k;
        m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = amp[i];
    }
    return m * m.adjoint();
}

double von_neumann_entropy(const StateVector& state, const std::vector<int>& subsystem) {
    const Eigen::MatrixXcd rho = reduced_density_matrix(state, subsystem);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigenvalue decomposition failed");
    }
    double entropy = 0.0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        const double lambda = solver.eigenvalues()[k];
        if (lambda > 1e-12) entropy -= lambda * std::log(lambda);
    }
    return entropy;
}

double half_chain_entropy(const StateVector& state) {
    const int n = state.num_qubits();
    if (n % 2 != 0) throw std::invalid_argument("half-chain entropy requires even N");
    std::vector<int> half(n / 2);
    for (int q = 0; q < n / 2; ++q) half[q] = q;
    return von_neumann_entropy(state, half);
}

double mutual_information(const StateVector& state, int qubit_a, int qubit_b) {
    if (qubit_a == qubit_b) throw std::invalid_argument("mutual information needs two sites");
    const double s_a = von_neumann_entropy(state, {qubit_a});
    const double s_b = von_neumann_entropy(state, {qubit_b});
    // On two qubits {a, b} is the whole system; a pure state has zero
    // joint entropy there, which the subsystem path cannot represent.
    const double s_ab = state.num_qubits() == 2
                            ? 0.0
                            : von_neumann_entropy(state, {qubit_a, qubit_b});
    return std::max(0.0, s_a + s_b - s_ab);
}

}  // namespace mvqc
