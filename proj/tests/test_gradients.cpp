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
#include <vector>

#include "doctest.h"
#include "mvqc/circuit.hpp"
#include "mvqc/gradients.hpp"
#include "mvqc/observable.hpp"
#include "mvqc/rng.hpp"

namespace {

using mvqc::CircuitFamily;
using mvqc::CircuitSpec;
using mvqc::MeasurementSite;
using mvqc::Observable;
using mvqc::SplitMix64;
using mvqc::StateVector;

CircuitSpec sample_circuit(CircuitFamily family, int n, int depth, uint64_t seed) {
    SplitMix64 rng(seed);
    return mvqc::build_random_circuit(family, n, depth, rng);
}

CircuitSpec with_param(const CircuitSpec& base, int index, double value) {
    CircuitSpec copy = base;
    copy.params[index] = value;
    return copy;
}

}  // namespace

TEST_CASE("finite differences recover an analytic derivative") {
    auto f = [](double x) { return std::sin(2.0 * x) + 0.5 * x * x; };
    const double x = 0.37;
    const double expected = 2.0 * std::cos(2.0 * x) + x;
    CHECK(mvqc::finite_difference_gradient(f, x, 1e-5) ==
          doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("finite differences reject extreme steps") {
    auto f = [](double x) { return x; };
    CHECK_THROWS_AS(mvqc::finite_difference_gradient(f, 0.0, 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(mvqc::finite_difference_gradient(f, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("parameter shift matches finite differences on unmeasured circuits") {
    const Observable obs = Observable::zz(0, 1);
    for (uint64_t seed = 1; seed <= 3; ++seed) {
        const CircuitSpec circuit = sample_circuit(
            seed % 2 ? CircuitFamily::XxzHva : CircuitFamily::Hea, 4, 2, seed);
        for (int slot : {0, circuit.num_params() / 2, circuit.num_params() - 1}) {
            auto f = [&](double value) {
                StateVector state(circuit.num_qubits);
                const CircuitSpec moved = with_param(circuit, slot, value);
                for (const auto& gate : moved.prep) state.apply_gate(gate);
                for (const auto& layer : moved.layers)
                    for (const auto& gate : layer)
                        state.apply_gate(gate, gate.param_slot >= 0
                                                   ? moved.params[gate.param_slot]
                                                   : gate.angle);
                return mvqc::expectation(state, obs);
            };
            const double fd = mvqc::finite_difference_gradient(f, circuit.params[slot], 1e-5);
            const double shift = mvqc::parameter_shift_gradient(circuit, slot, obs);
            CHECK(shift == doctest::Approx(fd).epsilon(1e-7));
        }
    }
}

TEST_CASE("both projective rules reduce to the parameter shift when nothing is measured") {
    const Observable obs = Observable::zz(0, 1);
    for (uint64_t seed = 5; seed < 9; ++seed) {
        const CircuitSpec circuit = sample_circuit(
            seed % 2 ? CircuitFamily::XxzHva : CircuitFamily::Hea, 4, 3, seed);
        const int slot = static_cast<int>(seed) % circuit.num_params();
        const double bare = mvqc::parameter_shift_gradient(circuit, slot, obs);
        const auto branch = mvqc::branch_gradient(circuit, {}, {}, slot, obs);
        const auto ensemble = mvqc::ensemble_gradient_exact(circuit, {}, slot, obs);
        CHECK(std::abs(branch.value - bare) < 1e-12);
        CHECK(std::abs(branch.estimator - bare) < 1e-12);
        CHECK(std::abs(ensemble.value - bare) < 1e-12);
        CHECK(branch.branch_probability == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ensemble.num_branches == 1);
    }
}

TEST_CASE("branch estimators average to the exact mixed-state gradient") {
    const Observable obs = Observable::zz(0, 1);
    const std::vector<MeasurementSite> sites = {{0, 0}, {0, 3}, {1, 1}};
    for (uint64_t seed = 11; seed < 15; ++seed) {
        const CircuitSpec circuit = sample_circuit(
            seed % 2 ? CircuitFamily::XxzHva : CircuitFamily::Hea, 4, 2, seed);
        const int slot = static_cast<int>(seed) % circuit.num_params();
        double averaged = 0.0;
        mvqc::for_each_branch(circuit, sites,
                              [&](uint32_t bits, const StateVector&, double probability) {
                                  std::vector<uint8_t> outcomes;
                                  for (size_t k = 0; k < sites.size(); ++k) {
                                      outcomes.push_back(
                                          static_cast<uint8_t>((bits >> k) & 1U));
                                  }
                                  const auto grad = mvqc::branch_gradient(circuit, sites,
                                                                          outcomes, slot, obs);
                                  averaged += probability * grad.estimator;
                              });
        const auto exact = mvqc::ensemble_gradient_exact(circuit, sites, slot, obs);
        CHECK(std::abs(averaged - exact.value) < 1e-10);
    }
}

TEST_CASE("branch gradient is linear in the observable") {
    const CircuitSpec circuit = sample_circuit(CircuitFamily::Hea, 3, 2, 21);
    const std::vector<MeasurementSite> sites = {{0, 1}};
    const std::vector<uint8_t> outcomes = {0};
    const Observable single = Observable::parse("Z0 Z1");
    const Observable doubled = Observable::parse("2 Z0 Z1");
    const auto a = mvqc::branch_gradient(circuit, sites, outcomes, 2, single);
    const auto b = mvqc::branch_gradient(circuit, sites, outcomes, 2, doubled);
    CHECK(std::abs(b.value - 2.0 * a.value) < 1e-12);
}

TEST_CASE("shifted branch evaluation at zero shift reproduces the replay") {
    const CircuitSpec circuit = sample_circuit(CircuitFamily::XxzHva, 4, 2, 31);
    const std::vector<MeasurementSite> sites = {{0, 0}, {1, 2}};
    const Observable obs = Observable::zz(0, 1);
    mvqc::for_each_branch(circuit, sites, [&](uint32_t bits, const mvqc::StateVector& state,
                                              double probability) {
        std::vector<uint8_t> outcomes = {static_cast<uint8_t>(bits & 1U),
                                         static_cast<uint8_t>((bits >> 1) & 1U)};
        const auto eval =
            mvqc::shifted_branch_expectation(circuit, sites, outcomes, 0, 0, 0.0, obs);
        REQUIRE(eval.has_value());
        CHECK(std::abs(eval->probability - probability) < 1e-12);
        CHECK(std::abs(eval->expectation - mvqc::expectation(state, obs)) < 1e-11);
    });
}

TEST_CASE("gradient calls validate their inputs") {
    const CircuitSpec circuit = sample_circuit(CircuitFamily::Hea, 3, 2, 41);
    const Observable obs = Observable::zz(0, 1);
    CHECK_THROWS_AS(mvqc::branch_gradient(circuit, {}, {}, -1, obs), std::invalid_argument);
    CHECK_THROWS_AS(mvqc::branch_gradient(circuit, {}, {}, circuit.num_params(), obs),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        mvqc::shifted_branch_expectation(circuit, {}, {}, 0, 5, 0.0, obs),
        std::out_of_range);

    // A branch that cannot occur: qubit 2 of |+>^3 after RY/CNOT/RX layers
    // still has nonzero weight for both outcomes, so force one by measuring
    // twice in a row and asking for opposite results.
    const std::vector<MeasurementSite> twice = {{0, 2}, {1, 2}};
    SUBCASE("impossible branches raise a domain error") {
        // Outcome (1, 0) can carry zero weight only for special circuits, so
        // build one explicitly: no gates in layer 1 acting on qubit 2.
        CircuitSpec frozen;
        frozen.family = CircuitFamily::Hea;
        frozen.num_qubits = 3;
        frozen.depth = 2;
        frozen.prep = {mvqc::GateOp::hadamard(2)};
        frozen.layers = {{mvqc::GateOp::ry(0, 0)}, {mvqc::GateOp::ry(0, 1)}};
        frozen.params = {0.4, 0.9};
        CHECK_THROWS_AS(
            mvqc::branch_gradient(frozen, twice, {uint8_t{1}, uint8_t{0}}, 0, obs),
            std::domain_error);
    }

    const std::vector<MeasurementSite> many = [] {
        std::vector<MeasurementSite> out;
        for (int l = 0; l < 2; ++l)
            for (int q = 0; q < 3; ++q) out.push_back({l, q});
        return out;
    }();
    CHECK_THROWS_AS(mvqc::ensemble_gradient_exact(circuit, many, 0, obs, 5),
                    std::invalid_argument);
}

TEST_CASE("variance experiment is deterministic and consistent with its samples") {
    const Observable obs = Observable::zz(0, 1);
    mvqc::GradientVarianceOptions options;
    options.bootstrap_resamples = 50;
    const auto est = mvqc::gradient_variance_experiment(CircuitFamily::Hea, 4, 3, 0.2, 40,
                                                        2026, obs, 0, options);
    CHECK(est.num_samples == 40);
    CHECK(est.variance > 0.0);
    CHECK(est.std_error > 0.0);

    const auto repeat = mvqc::gradient_variance_experiment(CircuitFamily::Hea, 4, 3, 0.2, 40,
                                                           2026, obs, 0, options);
    CHECK(repeat.variance == est.variance);
    CHECK(repeat.std_error == est.std_error);

    // The estimate is exactly the sample variance of the per-seed samples.
    std::vector<double> values;
    for (int k = 0; k < 40; ++k) {
        values.push_back(mvqc::gradient_sample(CircuitFamily::Hea, 4, 3, 0.2,
                                               mvqc::derive_seed(2026, k), obs, 0));
    }
    CHECK(mvqc::sample_variance(values) == doctest::Approx(est.variance).epsilon(1e-14));
}

TEST_CASE("sample variance requires two values") {
    CHECK_THROWS_AS(mvqc::sample_variance({1.0}), std::invalid_argument);
    CHECK(mvqc::sample_variance({1.0, 3.0}) == doctest::Approx(2.0).epsilon(1e-14));
}
