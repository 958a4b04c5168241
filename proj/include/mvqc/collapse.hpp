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
#include <cstdint>
#include <vector>

#include "mvqc/ensemble_table.hpp"

namespace mvqc {

// Finite-size-scaling analysis. The entropy curves S(N, p) are assumed to
// obey S(N, p) - S(N, p_c) = g(N^{1/nu} (p - p_c)) near the critical rate
// p_c, with g modeled as a 5th-degree polynomial. The fit minimizes a
// chi-squared statistic over (nu, g) per candidate p_c and reports the
// best candidate.

struct CollapseOptions {
    // chi^2 divides squared residuals by sigma^chi2_power, sigma floored
    // at 1e-9. Power 1 reproduces the unsquared-weight convention; the
    // default 2 is the standard statistic (the argmin over p_c barely
    // moves between the two).
    int chi2_power = 2;
    bool sigma_from_std = false;  // default: standard error of the mean
    double nu_init = 1.33;
    double nu_min = 0.2;
    double nu_max = 10.0;
    int max_iterations = 2000;
    double tolerance = 1e-8;
    int refine_factor = 4;  // candidate grid refinement around the seed/best
};

struct CollapseFit {
    double p_c = 0.0;
    double nu = 0.0;
    std::array<double, 6> poly_coeffs{};
    double chi2 = 0.0;
    int dof = 0;
    bool converged = false;
    double bootstrap_std_nu = 0.0;  // filled by bootstrap_nu callers
    int k_boot = 0;
    std::vector<double> candidates;      // every p_c candidate evaluated
    std::vector<double> candidate_chi2;  // matching best chi^2 per candidate
};

struct RescaledPoint {
    int num_qubits = 0;
    double rate = 0.0;
    double x = 0.0;      // N^{1/nu} (p - p_c)
    double y = 0.0;      // S(N, p) - S(N, p_c)
    double sigma = 0.0;  // error bar used in the fit
};

// Rescaled coordinates of every row. S(N, p_c) is linearly interpolated
// on each size's mean curve when p_c falls between grid points.
std::vector<RescaledPoint> rescale(const EnsembleTable& table, double p_c, double nu,
                                   const CollapseOptions& options = {});

// Joint (nu, polynomial) chi-squared fit per candidate p_c; returns the
// candidate with minimal chi^2. With an empty candidate list, candidates
// are the sampled p grid plus two refinement passes: around the rate
// where the S curves of different N are closest (the crossing region),
// then around the best candidate found. Preconditions: >= 3 distinct N,
// >= 8 distinct p.
CollapseFit fit_collapse(const EnsembleTable& table, std::vector<double> p_c_candidates = {},
                         const CollapseOptions& options = {});

// Standard error of nu over k_boot refits at fixed p_c, each on a table
// rebuilt from per-cell raw values resampled with replacement.
double bootstrap_nu(const EnsembleTable& table, const RawTable& raw, double p_c, int k_boot,
                    uint64_t seed, const CollapseOptions& options = {});

struct ExtrapolationPoint {
    int size_cap = 0;    // N': fit used sizes <= N'
    double nu = 0.0;
    double std_err = 0.0;
};

struct ExtrapolationFit {
    double slope = 0.0;      // a in nu(N') = a / N' + b
    double intercept = 0.0;  // b: the infinite-size estimate
    bool weighted = false;   // 1/std_err^2 weights were usable
    std::vector<ExtrapolationPoint> points;
};

// Weighted least squares of nu against 1/N'. Needs >= 2 points with
// distinct N'; falls back to unweighted when any error bar is <= 0.
ExtrapolationFit extrapolate_nu(const std::vector<ExtrapolationPoint>& points);

struct GradVarCollapseFit {
    double p_c = 0.0;  // held fixed (supplied by the entropy fit)
    double nu = 0.0;
    std::vector<int> plateau_sizes;     // N per plateau constant
    std::vector<double> plateau;        // C(N, p_c), linear scale
    double chi2 = 0.0;
    int dof = 0;
    bool converged = false;
    int excluded_rows = 0;  // non-positive variances dropped
};

struct GradVarCollapseOptions {
    bool global_plateau = false;  // single C shared across N
    double nu_init = 1.33;
    double nu_min = 0.2;
    double nu_max = 10.0;
    int max_iterations = 2000;
    double tolerance = 1e-8;
};

// Fits ln V(N, p) to ln[C(N) + exp(-|p - p_c| N^{1/nu})] by chi-squared
// minimization with sigma_ln = stderr / V per row.
GradVarCollapseFit fit_gradvar_collapse(const EnsembleTable& table, double p_c,
                                        const GradVarCollapseOptions& options = {});

struct PeakResult {
    double rate = 0.0;
    double value = 0.0;          // smoothed curve value at the peak
    bool low_confidence = false; // curve flat within error bars
};

// Argmax over the p grid of the 3-point moving average of mean mutual
// information at fixed separation. Needs >= 8 grid points.
PeakResult mutual_info_peak(const EnsembleTable& table, int separation);

}  // namespace mvqc
