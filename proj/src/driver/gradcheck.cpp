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

#include "mvqc/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include "mvqc/driver.hpp"
#include "mvqc/gradients.hpp"
#include "mvqc/oracle.hpp"

namespace mvqc {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr int kChannelMaxQubits = 5;  // full density-matrix walks stay cheap

struct Instance {
    CircuitSpec circuit;
    std::vector<MeasurementSite> sites;
    std::vector<uint8_t> outcomes;
    int param_index = 0;
    int occurrence = 0;  // random occurrence used for single-shift checks
};

Instance draw_instance(uint64_t seed) {
    SplitMix64 rng(seed);
    const CircuitFamily family =
        (rng.next_u64() & 1) ? CircuitFamily::Hea : CircuitFamily::XxzHva;
    const int n = family == CircuitFamily::XxzHva
                      ? 4 + 2 * static_cast<int>(rng.next_u64() % 2)
                      : 2 + static_cast<int>(rng.next_u64() % 5);
    const int depth = 1 + static_cast<int>(rng.next_u64() % 4);

    Instance inst;
    inst.circuit = build_random_circuit(family, n, depth, rng);

    const int m =
        std::min(static_cast<int>(rng.next_u64() % 5), depth * n);  // small circuits cap M
    std::vector<int> positions;
    while (static_cast<int>(positions.size()) < m) {
        const int c = static_cast<int>(rng.next_u64() % (depth * n));
        if (std::find(positions.begin(), positions.end(), c) == positions.end())
            positions.push_back(c);
    }
    std::sort(positions.begin(), positions.end());
    for (int c : positions) inst.sites.push_back({c / n, c % n});

    if (m > 0) {
        // Born-sample one outcome string from the exact branch weights.
        std::vector<std::pair<uint32_t, double>> branches;
        for_each_branch(inst.circuit, inst.sites,
                        [&](uint32_t bits, const StateVector&, double prob) {
                            branches.emplace_back(bits, prob);
                        });
        double total = 0.0;
        for (const auto& [bits, prob] : branches) total += prob;
        const double u = rng.next_double() * total;
        double cum = 0.0;
        uint32_t picked = branches.back().first;
        for (const auto& [bits, prob] : branches) {
            cum += prob;
            if (cum >= u) {
                picked = bits;
                break;
            }
        }
        for (int i = 0; i < m; ++i)
            inst.outcomes.push_back(static_cast<uint8_t>((picked >> i) & 1));
    }

    inst.param_index = static_cast<int>(rng.next_u64() %
                                        static_cast<uint64_t>(inst.circuit.num_params()));
    const auto occ = inst.circuit.param_occurrences(inst.param_index);
    inst.occurrence = static_cast<int>(rng.next_u64() % occ.size());
    return inst;
}

// Richardson-extrapolated central difference: error O(h^4).
double richardson_fd(const std::function<double(double)>& f, double x, double h = 2e-4) {
    const double coarse = finite_difference_gradient(f, x, h);
    const double fine = finite_difference_gradient(f, x, h / 2.0);
    return (4.0 * fine - coarse) / 3.0;
}

double corrupted_branch_value(const BranchGradient& grad) {
    double value = 0.0;
    for (const auto& term : grad.terms) {
        double plus_part = 0.0;
        if (term.plus)
            plus_part = term.plus->probability * (term.plus->expectation + grad.expectation);
        double minus_part = 0.0;
        if (term.minus)
            minus_part = term.minus->probability * (term.minus->expectation + grad.expectation);
        value += 0.5 * (plus_part - minus_part) / grad.branch_probability;
    }
    return value;
}

}  // namespace

GradcheckReport run_gradcheck(const GradcheckOptions& options) {
    if (options.instances < 1) throw std::invalid_argument("gradcheck: instances must be >= 1");
    GradcheckReport report;
    report.instances = options.instances;
    const Observable obs = Observable::zz(0, 1);

    for (int k = 0; k < options.instances; ++k) {
        const uint64_t sk = derive_seed(options.seed, static_cast<uint64_t>(k));
        const Instance inst = draw_instance(sk);
        const CircuitSpec& circuit = inst.circuit;
        const int l = inst.param_index;
        const auto occ = circuit.param_occurrences(l);
        bool ok = true;

        // Replay pipeline vs the dense-matrix branch at a few shifts.
        for (double shift : {0.0, kHalfPi, -kHalfPi}) {
            const auto impl = shifted_branch_expectation(circuit, inst.sites, inst.outcomes, l,
                                                         inst.occurrence, shift, obs);
            std::optional<ShiftTarget> target;
            if (shift != 0.0) target = ShiftTarget{occ[inst.occurrence], shift};
            const oracle::DenseBranch dense =
                oracle::dense_branch(circuit, inst.sites, inst.outcomes, obs, target);
            double dev;
            if (impl.has_value() != dense.exists) {
                // Disagreement is only possible within rounding of the
                // existence threshold; the surviving weight bounds it.
                dev = impl ? impl->probability : dense.probability;
            } else if (impl) {
                // Compare p and the unnormalized p * <O>; dividing by a
                // small branch weight would amplify benign rounding.
                dev = std::max(std::abs(impl->probability - dense.probability),
                               std::abs(impl->probability * impl->expectation -
                                        dense.probability * dense.expectation));
            } else {
                dev = 0.0;
            }
            report.max_pipeline_dev = std::max(report.max_pipeline_dev, dev);
            ok = ok && dev <= 1e-12;
        }

        // Branch gradient vs dense finite differences.
        {
            const BranchGradient grad =
                branch_gradient(circuit, inst.sites, inst.outcomes, l, obs);
            const double value =
                options.corrupt_sign ? corrupted_branch_value(grad) : grad.value;
            const auto f = [&](double t) {
                CircuitSpec shifted = circuit;
                shifted.params[l] = t;
                return oracle::dense_branch(shifted, inst.sites, inst.outcomes, obs).expectation;
            };
            const double fd = richardson_fd(f, circuit.params[l]);
            const double dev = std::abs(value - fd);
            report.max_branch_dev = std::max(report.max_branch_dev, dev);
            ok = ok && dev <= std::max(options.rel_tol * std::abs(fd), options.abs_tol);
        }

        // Ensemble gradient vs finite differences of the dense mixture.
        const EnsembleGradient ensemble = ensemble_gradient_exact(circuit, inst.sites, l, obs);
        {
            const auto f = [&](double t) {
                CircuitSpec shifted = circuit;
                shifted.params[l] = t;
                double acc = 0.0;
                const int m = static_cast<int>(inst.sites.size());
                std::vector<uint8_t> bits(m);
                for (uint32_t mask = 0; mask < (uint32_t{1} << m); ++mask) {
                    for (int i = 0; i < m; ++i) bits[i] = (mask >> i) & 1;
                    const oracle::DenseBranch branch =
                        oracle::dense_branch(shifted, inst.sites, bits, obs);
                    if (branch.exists) acc += branch.probability * branch.expectation;
                }
                return acc;
            };
            const double fd = richardson_fd(f, circuit.params[l]);
            const double dev = std::abs(ensemble.value - fd);
            report.max_ensemble_dev = std::max(report.max_ensemble_dev, dev);
            ok = ok && dev <= std::max(options.rel_tol * std::abs(fd), options.abs_tol);
        }

        // Same gradient vs the density-matrix channel, affordable sizes only.
        if (circuit.num_qubits <= kChannelMaxQubits) {
            ++report.channel_checked;
            const auto f = [&](double delta) {
                return oracle::channel_expectation(circuit, inst.sites, obs, l, delta);
            };
            const double fd = richardson_fd(f, 0.0);
            const double dev = std::abs(ensemble.value - fd);
            report.max_channel_dev = std::max(report.max_channel_dev, dev);
            ok = ok && dev <= std::max(options.rel_tol * std::abs(fd), options.abs_tol);

            const double cross =
                std::abs(ensemble_expectation(circuit, inst.sites, l, 0.0, obs) -
                         oracle::channel_expectation(circuit, inst.sites, obs, l, 0.0));
            report.max_cross_dev = std::max(report.max_cross_dev, cross);
            ok = ok && cross <= 1e-10;
        }

        // With no measurements both rules reduce to the textbook shift rule.
        {
            const std::vector<MeasurementSite> no_sites;
            const std::vector<uint8_t> no_outcomes;
            const double textbook = parameter_shift_gradient(circuit, l, obs);
            const double branch_red =
                std::abs(branch_gradient(circuit, no_sites, no_outcomes, l, obs).value -
                         textbook);
            const double ensemble_red =
                std::abs(ensemble_gradient_exact(circuit, no_sites, l, obs).value - textbook);
            const double dev = std::max(branch_red, ensemble_red);
            report.max_reduction_dev = std::max(report.max_reduction_dev, dev);
            ok = ok && dev <= 1e-12;
        }

        // Branch weights of a shifted circuit still sum to one.
        {
            double total = 0.0;
            for_each_branch(circuit, inst.sites,
                            [&](uint32_t, const StateVector&, double prob) { total += prob; },
                            ShiftTarget{occ[inst.occurrence], kHalfPi});
            const double dev = std::abs(1.0 - total);
            report.max_completeness_dev = std::max(report.max_completeness_dev, dev);
            ok = ok && dev <= 1e-9;
        }

        if (!ok) {
            ++report.failures;
            report.failing_seeds.push_back(sk);
        }
    }
    return report;
}

std::string GradcheckReport::summary() const {
    std::ostringstream out;
    out << "gradcheck: " << instances << " instances, " << failures << " failure(s)\n";
    out << "  pipeline (replay vs dense branch):   max dev " << max_pipeline_dev << "\n";
    out << "  branch gradient vs dense FD:         max dev " << max_branch_dev << "\n";
    out << "  ensemble gradient vs mixture FD:     max dev " << max_ensemble_dev << "\n";
    out << "  ensemble gradient vs channel FD:     max dev " << max_channel_dev << " ("
        << channel_checked << " instances)\n";
    out << "  enumerated mixture vs channel:       max dev " << max_cross_dev << "\n";
    out << "  M=0 reduction to shift rule:         max dev " << max_reduction_dev << "\n";
    out << "  shifted branch-weight completeness:  max dev " << max_completeness_dev << "\n";
    if (!failing_seeds.empty()) {
        out << "  failing instance seeds:";
        for (uint64_t s : failing_seeds) out << ' ' << s;
        out << "\n";
    }
    return out.str();
}

int cmd_gradcheck(const GradcheckOptions& options) {
    const GradcheckReport report = run_gradcheck(options);
    std::cout << report.summary();
    if (options.corrupt_sign) {
        // The control is healthy exactly when the corrupted rule fails.
        if (report.failures > 0) {
            std::cout << "gradcheck: sign-flip control failed as expected\n";
            return kExitOk;
        }
        std::cout << "gradcheck: sign-flip control did NOT fail; the suite has lost its teeth\n";
        return kExitOracle;
    }
    return report.passed() ? kExitOk : kExitOracle;
}

}  // namespace mvqc
