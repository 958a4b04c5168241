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

#include "mvqc/state_vector.hpp"

namespace mvqc {

enum class Pauli { X, Y, Z };

struct PauliFactor {
    int qubit;
    Pauli axis;
};

// One Pauli string with a real coefficient, e.g. 0.5 * Z0 Z1. Sites must
// be distinct.
struct PauliTerm {
    double coefficient = 1.0;
    std::vector<PauliFactor> factors;
};

// Real linear combination of Pauli strings; Hermitian by construction, so
// expectations are real.
struct Observable {
    std::vector<PauliTerm> terms;

    static Observable zz(int a, int b);  // Z_a Z_b, the landscape default

    // Parses strings like "Z0 Z1", "0.5 X0 Y2 + Z1", "-1.5 Z3".
    static Observable parse(const std::string& text);

    std::string to_string() const;
};

// <psi|O|psi> for a normalized state. Throws std::out_of_range if a factor
// addresses a qubit outside the state.
double expectation(const StateVector& state, const Observable& obs);

}  // namespace mvqc
