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

#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "mvqc/circuit.hpp"
#include "mvqc/rng.hpp"
#include "mvqc/state_vector.hpp"

namespace {

using mvqc::CircuitFamily;
using mvqc::CircuitSpec;
using mvqc::GateKind;
using mvqc::GateOp;
using mvqc::SplitMix64;
using mvqc::StateVector;

void apply_circuit(StateVector& state, const CircuitSpec& circuit) {
    auto resolved = [&](const GateOp& gate) {
        return gate.param_slot >= 0 ? circuit.params[gate.param_slot] : gate.angle;
    };
    for (const auto& gate : circuit.prep) state.apply_gate(gate, resolved(gate));
    for (const auto& layer : circuit.layers)
        for (const auto& gate : layer) state.apply_gate(gate, resolved(gate));
}

int count_kind(const std::vector<GateOp>& gates, GateKind kind) {
    int count = 0;
    for (const auto& gate : gates)
        if (gate.kind == kind) ++count;
    return count;
}

}  // namespace

TEST_CASE("parameter counts per family") {
    CHECK(mvqc::param_count(CircuitFamily::XxzHva, 8, 16) == 64);
    CHECK(mvqc::param_count(CircuitFamily::XxzHva, 4, 1) == 4);
    CHECK(mvqc::param_count(CircuitFamily::Hea, 6, 16) == 192);
    CHECK(mvqc::param_count(CircuitFamily::Hea, 3, 2) == 12);
}

TEST_CASE("family names round-trip") {
    CHECK(mvqc::family_from_name(mvqc::family_name(CircuitFamily::XxzHva)) ==
          CircuitFamily::XxzHva);
    CHECK(mvqc::family_from_name(mvqc::family_name(CircuitFamily::Hea)) == CircuitFamily::Hea);
    CHECK_THROWS_AS(mvqc::family_from_name("ghz"), std::invalid_argument);
}

TEST_CASE("xxz ansatz layout for four qubits") {
    const CircuitSpec spec = mvqc::build_xxz_hva(4, 2, std::vector<double>(8, 0.0));
    CHECK(spec.num_qubits == 4);
    CHECK(spec.depth == 2);

    // Preparation: one singlet per even bond (three gates per pair).
    REQUIRE(spec.prep.size() == 6);
    CHECK(spec.prep[0].kind == GateKind::RY);
    CHECK(spec.prep[0].q0 == 0);
    CHECK(spec.prep[1].kind == GateKind::CNOT);
    CHECK(spec.prep[1].q0 == 0);
    CHECK(spec.prep[1].q1 == 1);
    CHECK(spec.prep[2].kind == GateKind::RY);
    CHECK(spec.prep[3].q0 == 2);
    CHECK(spec.prep[4].q1 == 3);

    REQUIRE(spec.layers.size() == 2);
    const auto& layer = spec.layers[0];
    REQUIRE(layer.size() == 12);

    // Odd bonds (1,2) and (3,0) first: ZZ on the first slot, then YY and XX
    // sharing the second slot.
    CHECK(layer[0].kind == GateKind::RZZ);
    CHECK(layer[0].q0 == 1);
    CHECK(layer[0].q1 == 2);
    CHECK(layer[0].param_slot == 0);
    CHECK(layer[1].q0 == 3);
    CHECK(layer[1].q1 == 0);
    CHECK(layer[2].kind == GateKind::RYY);
    CHECK(layer[2].param_slot == 1);
    CHECK(layer[4].kind == GateKind::RXX);
    CHECK(layer[4].param_slot == 1);

    // Even bonds (0,1) and (2,3) second, on slots 2 and 3.
    CHECK(layer[6].kind == GateKind::RZZ);
    CHECK(layer[6].q0 == 0);
    CHECK(layer[6].q1 == 1);
    CHECK(layer[6].param_slot == 2);
    CHECK(layer[8].kind == GateKind::RYY);
    CHECK(layer[8].param_slot == 3);
    CHECK(layer[10].kind == GateKind::RXX);
    CHECK(layer[10].param_slot == 3);

    // Second layer uses the next block of four slots.
    CHECK(spec.layers[1][0].param_slot == 4);
    CHECK(spec.layers[1][11].param_slot == 7);
}

TEST_CASE("xxz ansatz at zero angles leaves the singlet product") {
    const CircuitSpec spec = mvqc::build_xxz_hva(4, 3, std::vector<double>(12, 0.0));
    StateVector state(4);
    apply_circuit(state, spec);
    // (|01> - |10>) x (|01> - |10>) / 2 up to a global sign, with qubit q
    // at bit q: weight only where each pair holds one excitation.
    const double sign = state.amplitude(5).real() > 0 ? 1.0 : -1.0;
    CHECK(std::abs(state.amplitude(5) - std::complex<double>(0.5 * sign, 0.0)) < 1e-12);
    CHECK(std::abs(state.amplitude(10) - std::complex<double>(0.5 * sign, 0.0)) < 1e-12);
    CHECK(std::abs(state.amplitude(6) + std::complex<double>(0.5 * sign, 0.0)) < 1e-12);
    CHECK(std::abs(state.amplitude(9) + std::complex<double>(0.5 * sign, 0.0)) < 1e-12);
    for (size_t idx : {size_t{0}, size_t{3}, size_t{12}, size_t{15}}) {
        CHECK(std::abs(state.amplitude(idx)) < 1e-12);
    }
}

TEST_CASE("xxz ansatz trajectories conserve total magnetization") {
    SplitMix64 rng(2024);
    const CircuitSpec spec = mvqc::build_random_circuit(CircuitFamily::XxzHva, 6, 3, rng);
    StateVector state(6);
    apply_circuit(state, spec);
    // Every basis state with weight has exactly N/2 bits set.
    for (size_t idx = 0; idx < state.dim(); ++idx) {
        if (std::abs(state.amplitude(idx)) > 1e-12) {
            CHECK(std::popcount(idx) == 3);
        }
    }
}

TEST_CASE("xxz ansatz rejects odd or tiny sizes and bad parameter counts") {
    CHECK_THROWS_AS(mvqc::build_xxz_hva(5, 1, std::vector<double>(4, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(mvqc::build_xxz_hva(0, 1, std::vector<double>(4, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(mvqc::build_xxz_hva(4, 1, std::vector<double>(3, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("hardware-efficient ansatz layout") {
    const CircuitSpec spec = mvqc::build_hea(3, 2, std::vector<double>(12, 0.0));
    REQUIRE(spec.prep.size() == 3);
    for (int q = 0; q < 3; ++q) {
        CHECK(spec.prep[q].kind == GateKind::H);
        CHECK(spec.prep[q].q0 == q);
    }

    REQUIRE(spec.layers.size() == 2);
    const auto& layer = spec.layers[0];
    REQUIRE(layer.size() == 9);  // 3 RY + 3 CNOT (chain + wrap) + 3 RX
    CHECK(layer[0].kind == GateKind::RY);
    CHECK(layer[0].param_slot == 0);
    CHECK(layer[2].param_slot == 2);
    CHECK(layer[3].kind == GateKind::CNOT);
    CHECK(layer[3].q0 == 0);
    CHECK(layer[3].q1 == 1);
    CHECK(layer[5].q0 == 2);  // wrap-around
    CHECK(layer[5].q1 == 0);
    CHECK(layer[6].kind == GateKind::RX);
    CHECK(layer[6].param_slot == 3);
    CHECK(layer[8].param_slot == 5);

    // Second layer starts at slot 2 * N = 6.
    CHECK(spec.layers[1][0].param_slot == 6);
    CHECK(spec.layers[1][8].param_slot == 11);
}

TEST_CASE("hardware-efficient ansatz without the wrap CNOT") {
    const CircuitSpec open = mvqc::build_hea(4, 1, std::vector<double>(8, 0.0), false);
    const CircuitSpec ring = mvqc::build_hea(4, 1, std::vector<double>(8, 0.0), true);
    CHECK(count_kind(open.layers[0], GateKind::CNOT) == 3);
    CHECK(count_kind(ring.layers[0], GateKind::CNOT) == 4);
}

TEST_CASE("hardware-efficient ansatz at zero angles gives the uniform superposition") {
    const CircuitSpec spec = mvqc::build_hea(3, 2, std::vector<double>(12, 0.0));
    StateVector state(3);
    apply_circuit(state, spec);
    const double expected = 1.0 / std::sqrt(8.0);
    for (size_t i = 0; i < state.dim(); ++i) {
        CHECK(std::abs(state.amplitude(i) - std::complex<double>(expected, 0.0)) < 1e-12);
    }
}

TEST_CASE("parameter occurrences reflect slot sharing") {
    const CircuitSpec hva = mvqc::build_xxz_hva(6, 2, std::vector<double>(8, 0.0));
    CHECK(hva.param_occurrences(0).size() == 3);  // ZZ across 3 odd bonds
    CHECK(hva.param_occurrences(1).size() == 6);  // YY + XX across 3 odd bonds
    CHECK(hva.param_occurrences(2).size() == 3);
    CHECK(hva.param_occurrences(3).size() == 6);
    CHECK(hva.param_occurrences(5).size() == 6);

    const CircuitSpec hea = mvqc::build_hea(4, 2, std::vector<double>(16, 0.0));
    for (int slot = 0; slot < hea.num_params(); ++slot) {
        CHECK(hea.param_occurrences(slot).size() == 1);
    }

    // Occurrence refs address the right gates.
    const auto refs = hva.param_occurrences(1);
    for (const auto& ref : refs) {
        const GateOp& gate = hva.gate(ref);
        CHECK(gate.param_slot == 1);
        CHECK((gate.kind == GateKind::RYY || gate.kind == GateKind::RXX));
    }
}

TEST_CASE("random circuits draw angles in the full rotation range") {
    SplitMix64 rng(17);
    const CircuitSpec spec = mvqc::build_random_circuit(CircuitFamily::Hea, 4, 4, rng);
    REQUIRE(spec.num_params() == 32);
    for (double angle : spec.params) {
        CHECK(angle >= 0.0);
        CHECK(angle < 2.0 * std::numbers::pi);
    }
    // Same seed reproduces the same draw.
    SplitMix64 rng2(17);
    const CircuitSpec again = mvqc::build_random_circuit(CircuitFamily::Hea, 4, 4, rng2);
    CHECK(again.params == spec.params);
}
