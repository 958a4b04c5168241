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

#include "mvqc/gates.hpp"

#include <cmath>
#include <stdexcept>

namespace mvqc {

namespace {
constexpr cdouble kI{0.0, 1.0};
}

const char* gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::RX: return "RX";
        case GateKind::RY: return "RY";
        case GateKind::RZZ: return "RZZ";
        case GateKind::RYY: return "RYY";
        case GateKind::RXX: return "RXX";
        case GateKind::CNOT: return "CNOT";
        case GateKind::H: return "H";
    }
    return "?";
}

bool is_two_qubit(GateKind kind) {
    switch (kind) {
        case GateKind::RZZ:
        case GateKind::RYY:
        case GateKind::RXX:
        case GateKind::CNOT: return true;
        default: return false;
    }
}

bool is_rotation(GateKind kind) {
    switch (kind) {
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZZ:
        case GateKind::RYY:
        case GateKind::RXX: return true;
        default: return false;
    }
}

std::array<cdouble, 4> one_qubit_matrix(GateKind kind, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    switch (kind) {
        case GateKind::RX:
            return {cdouble{c, 0}, -kI * s, -kI * s, cdouble{c, 0}};
        case GateKind::RY:
            return {cdouble{c, 0}, cdouble{-s, 0}, cdouble{s, 0}, cdouble{c, 0}};
        case GateKind::H: {
            const double h = 1.0 / std::sqrt(2.0);
            return {cdouble{h, 0}, cdouble{h, 0}, cdouble{h, 0}, cdouble{-h, 0}};
        }
        default:
            throw std::invalid_argument(std::string("not a one-qubit gate: ") +
                                        gate_kind_name(kind));
    }
}

std::array<cdouble, 16> two_qubit_matrix(GateKind kind, double angle) {
    const double c = std::cos(angle / 2.0);
    const cdouble ms = -kI * std::sin(angle / 2.0);
    std::array<cdouble, 16> m{};  // zero-initialized
    switch (kind) {
        case GateKind::RZZ:
            // diag(e^{-i t/2}, e^{+i t/2}, e^{+i t/2}, e^{-i t/2})
            m[0 * 4 + 0] = cdouble{c, 0} + ms;
            m[1 * 4 + 1] = cdouble{c, 0} - ms;
            m[2 * 4 + 2] = cdouble{c, 0} - ms;
            m[3 * 4 + 3] = cdouble{c, 0} + ms;
            return m;
        case GateKind::RXX:
            // cos I - i sin X(x)X: anti-diagonal coupling
            m[0 * 4 + 0] = m[1 * 4 + 1] = m[2 * 4 + 2] = m[3 * 4 + 3] = c;
            m[0 * 4 + 3] = m[1 * 4 + 2] = m[2 * 4 + 1] = m[3 * 4 + 0] = ms;
            return m;
        case GateKind::RYY:
            // Y(x)Y flips both bits with sign -(-1)^{b0+b1}
            m[0 * 4 + 0] = m[1 * 4 + 1] = m[2 * 4 + 2] = m[3 * 4 + 3] = c;
            m[0 * 4 + 3] = m[3 * 4 + 0] = -ms;
            m[1 * 4 + 2] = m[2 * 4 + 1] = ms;
            return m;
        case GateKind::CNOT:
            // control = q0 (low bit), target = q1
            m[0 * 4 + 0] = 1.0;
            m[2 * 4 + 2] = 1.0;
            m[1 * 4 + 3] = 1.0;
            m[3 * 4 + 1] = 1.0;
            return m;
        default:
            throw std::invalid_argument(std::string("not a two-qubit gate: ") +
                                        gate_kind_name(kind));
    }
}

}  // namespace mvqc
