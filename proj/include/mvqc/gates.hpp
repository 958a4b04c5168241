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

#include <array>
#include <complex>
#include <string>

namespace mvqc {

using cdouble = std::complex<double>;

enum class GateKind { RX, RY, RZZ, RYY, RXX, CNOT, H };

const char* gate_kind_name(GateKind kind);
bool is_two_qubit(GateKind kind);
bool is_rotation(GateKind kind);

// One gate in a circuit. Rotations follow the convention
// U(theta) = exp(-i * (theta/2) * A) with A the generating Pauli string,
// which is what makes the +-pi/2 parameter-shift identity exact.
// `param_slot` >= 0 binds the angle to an entry of the circuit's parameter
// vector; a slot may be shared by several gates (the XXZ-HVA binds one
// angle per sub-layer across all bonds). `angle` is only used for
// unparameterized rotations (param_slot == -1).
struct GateOp {
    GateKind kind;
    int q0 = -1;
    int q1 = -1;  // -1 for single-qubit gates
    double angle = 0.0;
    int param_slot = -1;

    static GateOp rx(int q, int slot) { return {GateKind::RX, q, -1, 0.0, slot}; }
    static GateOp ry(int q, int slot) { return {GateKind::RY, q, -1, 0.0, slot}; }
    static GateOp rzz(int a, int b, int slot) { return {GateKind::RZZ, a, b, 0.0, slot}; }
    static GateOp ryy(int a, int b, int slot) { return {GateKind::RYY, a, b, 0.0, slot}; }
    static GateOp rxx(int a, int b, int slot) { return {GateKind::RXX, a, b, 0.0, slot}; }
    static GateOp cnot(int control, int target) { return {GateKind::CNOT, control, target}; }
    static GateOp hadamard(int q) { return {GateKind::H, q}; }
};

// Dense matrix of a single-qubit gate, row-major over basis {|0>, |1>}.
std::array<cdouble, 4> one_qubit_matrix(GateKind kind, double angle);

// Dense matrix of a two-qubit gate, row-major over basis |q1 q0> in the
// order 00, 01, 10, 11 where the low bit belongs to q0.
std::array<cdouble, 16> two_qubit_matrix(GateKind kind, double angle);

}  // namespace mvqc
