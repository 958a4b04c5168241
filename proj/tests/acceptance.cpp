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
//
// End-to-end acceptance suite. Each numbered check prints exactly one
// PASS/FAIL line; the binary exits nonzero if any check fails. The
// physics checks regenerate their ensembles from fixed seeds, so a full
// run takes tens of minutes on a laptop.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mvqc/circuit.hpp"
#include "mvqc/collapse.hpp"
#include "mvqc/config.hpp"
#include "mvqc/driver.hpp"
#include "mvqc/ensemble_table.hpp"
#include "mvqc/entanglement.hpp"
#include "mvqc/gates.hpp"
#include "mvqc/gradcheck.hpp"
#include "mvqc/gradients.hpp"
#include "mvqc/observable.hpp"
#include "mvqc/oracle.hpp"
#include "mvqc/rng.hpp"
#include "mvqc/state_vector.hpp"
#include "mvqc/trajectory.hpp"

#include "synthetic.hpp"

namespace fs = std::filesystem;
using namespace mvqc;

namespace {

constexpr double kLn2 = 0.6931471805599453;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double value, int precision = 4) {
    std::ostringstream out;
    out.precision(precision);
    out << value;
    return out.str();
}

StateVector random_state(int num_qubits, uint64_t seed) {
    SplitMix64 rng(seed);
    const size_t dim = size_t{1} << num_qubits;
    std::vector<cdouble> amps(dim);
    double norm = 0.0;
    for (auto& a : amps) {
        a = {rng.next_double() - 0.5, rng.next_double() - 0.5};
        norm += std::norm(a);
    }
    norm = std::sqrt(norm);
    for (auto& a : amps) a /= norm;
    return StateVector(num_qubits, std::move(amps));
}

std::vector<double> rate_grid(double start, double stop, double step) {
    std::vector<double> out;
    for (int i = 0;; ++i) {
        double v = start + i * step;
        if (v > stop + step * 0.5) break;
        out.push_back(std::min(v, stop));
    }
    return out;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int suite_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

// ---------------------------------------------------------------------
// 1. Gradient oracle suite: 100 randomized instances cross-checked
//    against finite-difference and dense-matrix references.

Outcome check_gradient_oracles() {
    const auto start = std::chrono::steady_clock::now();
    GradcheckOptions options;
    options.instances = 100;
    const GradcheckReport report = run_gradcheck(options);
    const double secs = elapsed_seconds(start);
    std::ostringstream detail;
    detail << report.instances << " instances, max branch dev " << fmt(report.max_branch_dev, 2)
           << ", max ensemble dev " << fmt(report.max_ensemble_dev, 2) << ", " << fmt(secs, 3)
           << " s";
    if (!report.passed()) {
        std::ostringstream bad;
        bad << report.failures << " failing instances (first seed "
            << (report.failing_seeds.empty() ? 0 : report.failing_seeds.front()) << ")";
        return {false, bad.str()};
    }
    if (secs >= 60.0) return {false, "runtime " + fmt(secs, 3) + " s exceeds 60 s budget"};
    return {true, detail.str()};
}

// ---------------------------------------------------------------------
// 2. With zero measurements both projective rules reduce to the textbook
//    parameter-shift value.

Outcome check_shift_rule_reduction() {
    const Observable obs = Observable::parse("Z0 Z1");
    double max_dev = 0.0;
    SplitMix64 rng(716253);
    for (int k = 0; k < 50; ++k) {
        const CircuitFamily family =
            (k % 2 == 0) ? CircuitFamily::XxzHva : CircuitFamily::Hea;
        const int n = (family == CircuitFamily::XxzHva) ? 2 * (1 + rng.next_u64() % 3)
                                                        : 2 + static_cast<int>(rng.next_u64() % 5);
        const int depth = 1 + static_cast<int>(rng.next_u64() % 4);
        CircuitSpec circuit = build_random_circuit(family, n, depth, rng);
        const int slot = static_cast<int>(rng.next_u64() % circuit.params.size());
        const double reference = parameter_shift_gradient(circuit, slot, obs);
        const BranchGradient branch = branch_gradient(circuit, {}, {}, slot, obs);
        const EnsembleGradient ensemble = ensemble_gradient_exact(circuit, {}, slot, obs);
        max_dev = std::max(max_dev, std::abs(branch.value - reference));
        max_dev = std::max(max_dev, std::abs(ensemble.value - reference));
    }
    std::ostringstream detail;
    detail << "50 instances, max deviation " << fmt(max_dev, 2);
    if (max_dev > 1e-12) return {false, detail.str() + " exceeds 1e-12"};
    return {true, detail.str()};
}

// ---------------------------------------------------------------------
// 3. Entropy oracles: closed forms, the dense density-matrix reference,
//    and the purity symmetry S(A) = S(complement of A).

Outcome check_entropy_oracles() {
    const auto start = std::chrono::steady_clock::now();

    StateVector bell(2);
    bell.apply_gate(GateOp::hadamard(0));
    bell.apply_gate(GateOp::cnot(0, 1));
    if (std::abs(von_neumann_entropy(bell, {0}) - kLn2) > 1e-10)
        return {false, "Bell pair entropy deviates from ln 2"};

    SplitMix64 rng(90210);
    for (int trial = 0; trial < 10; ++trial) {
        StateVector product(5);
        for (int q = 0; q < 5; ++q) {
            product.apply_gate({GateKind::RY, q, -1, rng.next_angle(), -1});
            product.apply_gate({GateKind::RX, q, -1, rng.next_angle(), -1});
        }
        for (const auto& cut : {std::vector<int>{0}, {1, 3}, {0, 1, 2}})
            if (von_neumann_entropy(product, cut) > 1e-10)
                return {false, "product state has nonzero cut entropy"};
    }

    double max_oracle_dev = 0.0;
    for (int n = 2; n <= 6; ++n) {
        for (uint64_t seed = 1; seed <= 4; ++seed) {
            const StateVector state = random_state(n, 1000 * n + seed);
            std::vector<int> subsystem;
            SplitMix64 pick(seed * 31 + n);
            for (int q = 0; q < n; ++q)
                if (pick.next_double() < 0.5) subsystem.push_back(q);
            if (subsystem.empty() || static_cast<int>(subsystem.size()) == n)
                subsystem = {0};
            const double fast = von_neumann_entropy(state, subsystem);
            const double dense = oracle::entropy_from_full_density(state, subsystem);
            max_oracle_dev = std::max(max_oracle_dev, std::abs(fast - dense));
        }
    }
    if (max_oracle_dev > 1e-10)
        return {false, "dense-oracle deviation " + fmt(max_oracle_dev, 2) + " exceeds 1e-10"};

    double max_sym_dev = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 6;
        const StateVector state = random_state(n, 555000 + trial);
        SplitMix64 pick(777 + trial);
        std::vector<int> a, complement;
        for (int q = 0; q < n; ++q)
            (pick.next_double() < 0.5 ? a : complement).push_back(q);
        if (a.empty() || complement.empty()) {
            a = {0};
            complement = {1, 2, 3, 4, 5};
        }
        max_sym_dev = std::max(max_sym_dev, std::abs(von_neumann_entropy(state, a) -
                                                     von_neumann_entropy(state, complement)));
    }
    const double secs = elapsed_seconds(start);
    std::ostringstream detail;
    detail << "dense dev " << fmt(max_oracle_dev, 2) << ", symmetry dev " << fmt(max_sym_dev, 2)
           << ", " << fmt(secs, 3) << " s";
    if (max_sym_dev > 1e-9) return {false, detail.str() + " exceeds 1e-9"};
    if (secs >= 30.0) return {false, "runtime " + fmt(secs, 3) + " s exceeds 30 s budget"};
    return {true, detail.str()};
}

// ---------------------------------------------------------------------
// 4. Branch completeness: outcome probabilities over all 2^M strings of a
//    fixed site set sum to one.

Outcome check_branch_completeness() {
    SplitMix64 rng(24601);
    double max_dev = 0.0;
    for (int k = 0; k < 20; ++k) {
        const CircuitFamily family =
            (k % 2 == 0) ? CircuitFamily::Hea : CircuitFamily::XxzHva;
        const int n = (family == CircuitFamily::XxzHva) ? 4 : 3 + static_cast<int>(rng.next_u64() % 3);
        const int depth = 2 + static_cast<int>(rng.next_u64() % 3);
        CircuitSpec circuit = build_random_circuit(family, n, depth, rng);
        std::vector<MeasurementSite> sites;
        for (int layer = 0; layer < depth; ++layer)
            for (int q = 0; q < n; ++q)
                if (rng.next_double() < 0.4) sites.push_back({layer, q});
        while (sites.size() > 8) sites.erase(sites.begin() + rng.next_u64() % sites.size());
        max_dev = std::max(max_dev, std::abs(1.0 - sum_branch_probabilities(circuit, sites)));
    }
    std::ostringstream detail;
    detail << "20 circuits, max |1 - sum p| = " << fmt(max_dev, 2);
    if (max_dev > 1e-9) return {false, detail.str() + " exceeds 1e-9"};
    return {true, detail.str()};
}

// ---------------------------------------------------------------------
// 5/6. Entanglement transition sweeps: regenerate the ensemble, fit the
//      collapse, and gate on the fitted critical rate and exponent.

struct TransitionResult {
    Outcome outcome;
    bool fitted = false;
    double p_c = 0.0;
};

TransitionResult check_transition(const fs::path& scratch, CircuitFamily family,
                                  double rate_start, double rate_stop, uint64_t seed,
                                  double p_c_lo, double p_c_hi) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentConfig config;
    config.family = family;
    config.sizes = {6, 8, 10, 12};
    config.depth = 16;
    config.rates = rate_grid(rate_start, rate_stop, 0.05);
    config.samples = 500;
    config.seed = seed;

    const fs::path out_dir = scratch / ("sweep_" + std::string(family_name(family)));
    fs::create_directories(out_dir);
    DriverOptions options;
    options.out_dir = out_dir.string();
    options.threads = suite_threads();
    options.write_raw = true;
    options.quiet = true;
    if (cmd_sweep(config, options) != kExitOk)
        return {{false, "ensemble sweep failed"}, false, 0.0};

    CollapseArgs args;
    args.table_path = (out_dir / ("sweep_" + std::string(family_name(family)) + ".csv")).string();
    args.raw_path =
        (out_dir / ("sweep_" + std::string(family_name(family)) + "_raw.csv")).string();
    args.k_boot = 20;
    args.seed = seed;
    CollapseReport report;
    const int status = cmd_collapse(args, options, &report);
    const CollapseFit& fit = report.entropy_fit;
    const double secs = elapsed_seconds(start);
    std::ostringstream detail;
    detail << "p_c = " << fmt(fit.p_c) << ", nu = " << fmt(fit.nu) << ", chi2/dof = "
           << fmt(fit.dof > 0 ? fit.chi2 / fit.dof : 0.0, 3) << ", " << fmt(secs / 60.0, 3)
           << " min";
    if (status != kExitOk)
        return {{false, "collapse fit did not converge (" + detail.str() + ")"}, true, fit.p_c};
    const bool in_band = fit.p_c >= p_c_lo && fit.p_c <= p_c_hi && fit.nu >= 0.8 && fit.nu <= 2.0;
    if (!in_band)
        return {{false, detail.str() + " outside p_c in [" + fmt(p_c_lo, 2) + ", " +
                            fmt(p_c_hi, 2) + "], nu in [0.8, 2.0]"},
                true,
                fit.p_c};
    return {{true, detail.str()}, true, fit.p_c};
}

// ---------------------------------------------------------------------
// 7. The mutual-information curve I(0, N/2) at N = 12 peaks at the fitted
//    critical rate (within one and a half grid steps).

Outcome mutinfo_peak_for_family(const fs::path& scratch, CircuitFamily family,
                                double rate_start, double rate_stop, uint64_t seed,
                                const std::optional<double>& fitted_p_c) {
    if (!fitted_p_c)
        return {false, "skipped: no fitted critical rate from the transition check"};
    const auto start = std::chrono::steady_clock::now();
    ExperimentConfig config;
    config.family = family;
    config.sizes = {12};
    config.depth = 16;
    config.rates = rate_grid(rate_start, rate_stop, 0.05);
    config.samples = 500;
    config.seed = seed;
    config.separations = {6};

    const fs::path out_dir = scratch / ("mutinfo_" + std::string(family_name(family)));
    fs::create_directories(out_dir);
    DriverOptions options;
    options.out_dir = out_dir.string();
    options.threads = suite_threads();
    options.quiet = true;
    if (cmd_mutinfo(config, options) != kExitOk)
        return {false, "mutual-information ensemble failed"};

    const EnsembleTable table = read_table_csv(
        (out_dir / ("mutinfo_" + std::string(family_name(family)) + ".csv")).string());
    const PeakResult peak = mutual_info_peak(table, 6);
    const double secs = elapsed_seconds(start);
    std::ostringstream detail;
    detail << "peak at p = " << fmt(peak.rate) << " vs fitted p_c = " << fmt(*fitted_p_c)
           << (peak.low_confidence ? " (low confidence)" : "") << ", " << fmt(secs / 60.0, 3)
           << " min";
    if (std::abs(peak.rate - *fitted_p_c) > 0.1)
        return {false, detail.str() + "; |peak - p_c| exceeds 0.1"};
    return {true, detail.str()};
}

Outcome check_mutinfo_peaks(const fs::path& scratch, const std::optional<double>& xxz_p_c,
                            const std::optional<double>& hea_p_c) {
    const Outcome xxz =
        mutinfo_peak_for_family(scratch, CircuitFamily::XxzHva, 0.0, 0.6, 424244, xxz_p_c);
    const Outcome hea =
        mutinfo_peak_for_family(scratch, CircuitFamily::Hea, 0.2, 0.8, 424245, hea_p_c);
    const std::string detail = "xxz: " + xxz.detail + "; hea: " + hea.detail;
    return {xxz.pass && hea.pass, detail};
}

// ---------------------------------------------------------------------
// 8. Gradient-variance landscape: decaying with N in the volume phase,
//    N-independent plateau deep in the area phase.

Outcome check_gradient_variance(const fs::path& scratch) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentConfig config;
    config.family = CircuitFamily::Hea;
    config.sizes = {6, 8, 10};
    config.depth = 16;
    config.rates = {0.0, 0.8};
    config.samples = 500;
    config.seed = 424246;

    const fs::path out_dir = scratch / "gradvar_hea";
    fs::create_directories(out_dir);
    DriverOptions options;
    options.out_dir = out_dir.string();
    options.threads = suite_threads();
    options.quiet = true;
    if (cmd_gradvar(config, options) != kExitOk)
        return {false, "gradient-variance ensemble failed"};

    const EnsembleTable table = read_table_csv((out_dir / "gradvar_hea.csv").string());
    const EnsembleRow* v6_0 = table.find(6, 0.0);
    const EnsembleRow* v10_0 = table.find(10, 0.0);
    const EnsembleRow* v6_8 = table.find(6, 0.8);
    const EnsembleRow* v10_8 = table.find(10, 0.8);
    if (!v6_0 || !v10_0 || !v6_8 || !v10_8) return {false, "variance table is missing cells"};
    const double decay = v6_0->value / v10_0->value;
    const double plateau_ratio = std::max(v6_8->value, v10_8->value) /
                                 std::min(v6_8->value, v10_8->value);
    const double secs = elapsed_seconds(start);
    std::ostringstream detail;
    detail << "p=0 variance ratio N6/N10 = " << fmt(decay, 3)
           << ", p=0.8 spread factor = " << fmt(plateau_ratio, 3) << ", " << fmt(secs / 60.0, 3)
           << " min";
    if (decay < 2.0) return {false, detail.str() + "; decay factor below 2"};
    if (plateau_ratio > 3.0) return {false, detail.str() + "; plateau spread above 3"};
    return {true, detail.str()};
}

// ---------------------------------------------------------------------
// 9. Fit recovery on synthetic tables with planted exponents.

Outcome check_synthetic_recovery() {
    using testing::grid;
    testing::SyntheticScaling scaling;
    scaling.p_c = 0.3;
    scaling.nu = 4.0 / 3.0;
    scaling.noise = 0.01;
    scaling.error_bar = 0.01;
    const EnsembleTable entropy =
        testing::synthetic_entropy_table({6, 8, 10, 12}, grid(0.0, 0.6, 0.05), scaling);
    const CollapseFit fit = fit_collapse(entropy);
    std::ostringstream detail;
    detail << "entropy fit p_c = " << fmt(fit.p_c) << ", nu = " << fmt(fit.nu);
    if (!fit.converged) return {false, detail.str() + "; fit did not converge"};
    if (std::abs(fit.p_c - 0.3) > 0.05)
        return {false, detail.str() + "; p_c misses 0.3 by more than one grid step"};
    if (std::abs(fit.nu - 4.0 / 3.0) > 0.15)
        return {false, detail.str() + "; nu misses 4/3 by more than 0.15"};

    const EnsembleTable gradvar = testing::synthetic_gradvar_table(
        {6, 8, 10}, grid(0.0, 0.8, 0.05), 0.3, 1.3, {0.3, 0.2, 0.1});
    const GradVarCollapseFit gv = fit_gradvar_collapse(gradvar, 0.3);
    detail << "; variance fit nu = " << fmt(gv.nu);
    if (!gv.converged) return {false, detail.str() + "; variance fit did not converge"};
    if (std::abs(gv.nu - 1.3) > 0.05)
        return {false, detail.str() + "; variance nu misses 1.3 by more than 0.05"};
    return {true, detail.str()};
}

// ---------------------------------------------------------------------
// 10. Byte-identical outputs across thread counts and across an
//     interrupted-then-resumed run.

Outcome check_determinism(const fs::path& scratch) {
    ExperimentConfig config;
    config.family = CircuitFamily::Hea;
    config.sizes = {4, 6};
    config.depth = 3;
    config.rates = {0.0, 0.2, 0.4};
    config.samples = 20;
    config.seed = 31337;

    const std::vector<std::string> artifacts = {"sweep_hea.csv", "sweep_hea_raw.csv",
                                                "sweep_hea.manifest.json"};
    auto run = [&](const fs::path& dir, int threads, int max_cells, bool resume) {
        fs::create_directories(dir);
        DriverOptions options;
        options.out_dir = dir.string();
        options.threads = threads;
        options.write_raw = true;
        options.quiet = true;
        options.max_cells = max_cells;
        options.resume = resume;
        return cmd_sweep(config, options);
    };

    const fs::path one = scratch / "det_threads1";
    const fs::path eight = scratch / "det_threads8";
    const fs::path resumed = scratch / "det_resume";
    if (run(one, 1, 0, false) != kExitOk) return {false, "single-thread run failed"};
    if (run(eight, 8, 0, false) != kExitOk) return {false, "eight-thread run failed"};
    for (const auto& name : artifacts)
        if (slurp(one / name) != slurp(eight / name))
            return {false, name + " differs between 1 and 8 threads"};

    if (run(resumed, 2, 1, false) != kExitOk) return {false, "interrupted run failed"};
    if (fs::exists(resumed / "sweep_hea.csv"))
        return {false, "interrupted run unexpectedly wrote the final table"};
    if (run(resumed, 8, 0, true) != kExitOk) return {false, "resumed run failed"};
    for (const auto& name : artifacts)
        if (slurp(one / name) != slurp(resumed / name))
            return {false, name + " differs between one-shot and resumed runs"};
    return {true, "1 vs 8 threads and interrupt+resume byte-identical"};
}

}  // namespace

int main() {
    const fs::path scratch = fs::temp_directory_path() / "mvqc_acceptance";
    std::error_code ec;
    fs::remove_all(scratch, ec);
    fs::create_directories(scratch);

    int failures = 0;
    auto report = [&failures](const std::string& name, const Outcome& outcome) {
        if (outcome.pass) {
            std::cout << "PASS - " << name;
            if (!outcome.detail.empty()) std::cout << " (" << outcome.detail << ")";
            std::cout << '\n';
        } else {
            ++failures;
            std::cout << "FAIL - " << name << ": " << outcome.detail << '\n';
        }
        std::cout.flush();
    };

    report("gradient oracle suite", check_gradient_oracles());
    report("shift-rule reduction at zero measurements", check_shift_rule_reduction());
    report("entropy oracles", check_entropy_oracles());
    report("branch completeness", check_branch_completeness());

    const TransitionResult xxz =
        check_transition(scratch, CircuitFamily::XxzHva, 0.0, 0.6, 424242, 0.18, 0.32);
    report("entanglement transition, xxz ansatz", xxz.outcome);
    const TransitionResult hea =
        check_transition(scratch, CircuitFamily::Hea, 0.2, 0.8, 424243, 0.40, 0.60);
    report("entanglement transition, hardware ansatz", hea.outcome);

    report("mutual-information peaks at the fitted critical rates",
           check_mutinfo_peaks(scratch,
                               xxz.fitted ? std::optional<double>(xxz.p_c) : std::nullopt,
                               hea.fitted ? std::optional<double>(hea.p_c) : std::nullopt));

    report("gradient-variance landscape", check_gradient_variance(scratch));
    report("synthetic fit recovery", check_synthetic_recovery());
    report("determinism and resume", check_determinism(scratch));

    if (failures > 0) {
        std::cout << failures << " acceptance check(s) failed\n";
        return 1;
    }
    std::cout << "all acceptance checks passed\n";
    return 0;
}
