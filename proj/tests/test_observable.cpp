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

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "mvqc/gates.hpp"
#include "mvqc/observable.hpp"
#include "mvqc/oracle.hpp"
#include "mvqc/rng.hpp"
#include "mvqc/state_vector.hpp"

namespace {

using mvqc::GateOp;
using mvqc::Observable;
using mvqc::Pauli;
using mvqc::SplitMix64;
using mvqc::StateVector;
using Complex = std::complex<double>;

StateVector random_state(int num_qubits, uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<Complex> amps(size_t{1} << num_qubits);
    double norm_sq = 0.0;
    for (auto& amp : amps) {
        amp = Complex(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0);
        norm_sq += std::norm(amp);
    }
    const double scale = 1.0 / std::sqrt(norm_sq);
    for (auto& amp : amps) amp *= scale;
    return StateVector(num_qubits, std::move(amps));
}

StateVector bell_pair() {
    StateVector state(2);
    state.apply_gate(GateOp::hadamard(0));
    state.apply_gate(GateOp::cnot(0, 1));
    return state;
}

}  // namespace

TEST_CASE("parse reads a plain Pauli string") {
    const Observable obs = Observable::parse("Z0 Z1");
    REQUIRE(obs.terms.size() == 1);
    CHECK(obs.terms[0].coefficient == 1.0);
    REQUIRE(obs.terms[0].factors.size() == 2);
    CHECK(obs.terms[0].factors[0].qubit == 0);
    CHECK(obs.terms[0].factors[0].axis == Pauli::Z);
    CHECK(obs.terms[0].factors[1].qubit == 1);
    CHECK(obs.terms[0].factors[1].axis == Pauli::Z);
}

TEST_CASE("parse reads coefficients and multiple terms") {
    const Observable obs = Observable::parse("0.5 X0 Y2 + Z1");
    REQUIRE(obs.terms.size() == 2);
    CHECK(obs.terms[0].coefficient == doctest::Approx(0.5));
    REQUIRE(obs.terms[0].factors.size() == 2);
    CHECK(obs.terms[0].factors[1].axis == Pauli::Y);
    CHECK(obs.terms[1].coefficient == doctest::Approx(1.0));
    CHECK(obs.terms[1].factors[0].qubit == 1);

    const Observable neg = Observable::parse("-1.5 Z3");
    REQUIRE(neg.terms.size() == 1);
    CHECK(neg.terms[0].coefficient == doctest::Approx(-1.5));
    CHECK(neg.terms[0].factors[0].qubit == 3);
}

TEST_CASE("parse round-trips through to_string") {
    for (const char* text : {"Z0 Z1", "0.5 X0 Y2 + Z1", "-1.5 Z3", "2 X0 + -1 X1 + Z0 Z2"}) {
        const Observable obs = Observable::parse(text);
        const Observable again = Observable::parse(obs.to_string());
        REQUIRE(again.terms.size() == obs.terms.size());
        for (size_t t = 0; t < obs.terms.size(); ++t) {
            CHECK(again.terms[t].coefficient == doctest::Approx(obs.terms[t].coefficient));
            REQUIRE(again.terms[t].factors.size() == obs.terms[t].factors.size());
            for (size_t f = 0; f < obs.terms[t].factors.size(); ++f) {
                CHECK(again.terms[t].factors[f].qubit == obs.terms[t].factors[f].qubit);
                CHECK(again.terms[t].factors[f].axis == obs.terms[t].factors[f].axis);
            }
        }
    }
}

TEST_CASE("parse rejects malformed input") {
    CHECK_THROWS_AS(Observable::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(Observable::parse("Q0"), std::invalid_argument);
    CHECK_THROWS_AS(Observable::parse("Zx"), std::invalid_argument);
    CHECK_THROWS_AS(Observable::parse("1.2.3 Z0"), std::invalid_argument);
}

TEST_CASE("zz helper equals the parsed form") {
    const Observable a = Observable::zz(0, 1);
    const Observable b = Observable::parse("Z0 Z1");
    CHECK(a.to_string() == b.to_string());
}

TEST_CASE("fixed single-qubit expectations") {
    StateVector zero(1);
    CHECK(mvqc::expectation(zero, Observable::parse("Z0")) == doctest::Approx(1.0).epsilon(1e-14));

    StateVector one(1);
    one.apply_gate(GateOp{mvqc::GateKind::RX, 0, -1, std::numbers::pi, -1});
    CHECK(mvqc::expectation(one, Observable::parse("Z0")) == doctest::Approx(-1.0).epsilon(1e-13));

    StateVector plus(1);
    plus.apply_gate(GateOp::hadamard(0));
    CHECK(mvqc::expectation(plus, Observable::parse("X0")) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(mvqc::expectation(plus, Observable::parse("Z0"))) < 1e-14);
}

TEST_CASE("Bell pair correlators") {
    const StateVector bell = bell_pair();
    CHECK(mvqc::expectation(bell, Observable::parse("Z0 Z1")) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(mvqc::expectation(bell, Observable::parse("X0 X1")) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(mvqc::expectation(bell, Observable::parse("Y0 Y1")) == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(std::abs(mvqc::expectation(bell, Observable::parse("Z0"))) < 1e-13);
}

TEST_CASE("expectation matches the dense matrix oracle") {
    const int n = 4;
    const std::vector<std::string> texts = {"Z0 Z1", "0.5 X0 Y2 + Z1", "-1.5 Z3",
                                            "X0 Y1 Z2 + 0.25 Z0 Z3", "Y2"};
    int seed = 11;
    for (const auto& text : texts) {
        const Observable obs = Observable::parse(text);
        const StateVector state = random_state(n, static_cast<uint64_t>(seed++));
        Eigen::VectorXcd v(state.dim());
        for (size_t i = 0; i < state.dim(); ++i) v(static_cast<Eigen::Index>(i)) = state.amplitude(i);
        const Eigen::MatrixXcd mat = mvqc::oracle::observable_matrix(obs, n);
        const double expected = (v.adjoint() * mat * v)(0, 0).real();
        CHECK(mvqc::expectation(state, obs) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("expectation validates qubits") {
    StateVector state(2);
    CHECK_THROWS_AS(mvqc::expectation(state, Observable::parse("Z5")), std::out_of_range);
    CHECK_THROWS_AS(mvqc::expectation(state, Observable::parse("Z0 X0")), std::invalid_argument);
}
