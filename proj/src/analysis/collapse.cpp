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

#include "mvqc/collapse.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "mvqc/nelder_mead.hpp"
#include "mvqc/rng.hpp"

namespace mvqc {

namespace {

constexpr double kSigmaFloor = 1e-9;
constexpr double kPenalty = 1e12;

double row_sigma(const EnsembleRow& row, const CollapseOptions& options) {
    const double s = options.sigma_from_std ? row.std_dev : row.std_error;
    return std::max(s, kSigmaFloor);
}

double poly_eval(const std::array<double, 6>& c, double x) {
    double acc = 0.0;
    for (int k = 5; k >= 0; --k) acc = acc * x + c[k];
    return acc;
}

struct SizeCurve {
    int num_qubits = 0;
    std::vector<double> rates;
    std::vector<double> means;
};

std::vector<SizeCurve> size_curves(const EnsembleTable& table) {
    std::map<int, std::map<double, double>> by_size;
    for (const EnsembleRow& row : table.rows) {
        by_size[row.num_qubits][row.rate] = row.value;
    }
    std::vector<SizeCurve> curves;
    for (const auto& [n, points] : by_size) {
        SizeCurve curve;
        curve.num_qubits = n;
        for (const auto& [p, mean] : points) {
            curve.rates.push_back(p);
            curve.means.push_back(mean);
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

double interpolate_mean(const SizeCurve& curve, double p_c) {
    const auto& ps = curve.rates;
    if (p_c < ps.front() || p_c > ps.back()) {
        throw std::invalid_argument("p_c outside the sampled rate range");
    }
    const auto upper = std::lower_bound(ps.begin(), ps.end(), p_c);
    const size_t j = static_cast<size_t>(upper - ps.begin());
    if (j < ps.size() && ps[j] == p_c) return curve.means[j];
    const double t = (p_c - ps[j - 1]) / (ps[j] - ps[j - 1]);
    return curve.means[j - 1] + t * (curve.means[j] - curve.means[j - 1]);
}

// Rows flattened for the objective: per row an index into the distinct
// size list, so N^{1/nu} is computed once per size per evaluation.
struct FitData {
    std::vector<int> sizes;
    std::vector<int> size_index;
    std::vector<double> rate;
    std::vector<double> y;       // value - S(N, p_c)
    std::vector<double> weight;  // 1 / sigma^chi2_power
    double p_c = 0.0;
};

FitData prepare_fit_data(const EnsembleTable& table, double p_c,
                         const CollapseOptions& options) {
    const std::vector<SizeCurve> curves = size_curves(table);
    FitData data;
    data.p_c = p_c;
    std::map<int, std::pair<int, double>> at_pc;  // N -> (size index, S(N, p_c))
    for (const SizeCurve& curve : curves) {
        at_pc[curve.num_qubits] = {static_cast<int>(data.sizes.size()),
                                   interpolate_mean(curve, p_c)};
        data.sizes.push_back(curve.num_qubits);
    }
    for (const EnsembleRow& row : table.rows) {
        const auto& [idx, s_pc] = at_pc.at(row.num_qubits);
        data.size_index.push_back(idx);
        data.rate.push_back(row.rate);
        data.y.push_back(row.value - s_pc);
        data.weight.push_back(1.0 / std::pow(row_sigma(row, options), options.chi2_power));
    }
    return data;
}

double chi2_at(const FitData& data, double nu, const std::array<double, 6>& coeffs) {
    std::vector<double> scale(data.sizes.size());
    for (size_t s = 0; s < data.sizes.size(); ++s) {
        scale[s] = std::pow(static_cast<double>(data.sizes[s]), 1.0 / nu);
    }
    double chi2 = 0.0;
    for (size_t i = 0; i < data.y.size(); ++i) {
        const double x = scale[data.size_index[i]] * (data.rate[i] - data.p_c);
        const double r = data.y[i] - poly_eval(coeffs, x);
        chi2 += data.weight[i] * r * r;
    }
    return chi2;
}

// Weighted least-squares polynomial seed at fixed nu.
std::array<double, 6> seed_polynomial(const FitData& data, double nu) {
    const Eigen::Index rows = static_cast<Eigen::Index>(data.y.size());
    Eigen::MatrixXd v(rows, 6);
    Eigen::VectorXd rhs(rows);
    std::vector<double> scale(data.sizes.size());
    for (size_t s = 0; s < data.sizes.size(); ++s) {
        scale[s] = std::pow(static_cast<double>(data.sizes[s]), 1.0 / nu);
    }
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double x = scale[data.size_index[i]] * (data.rate[i] - data.p_c);
        const double w = std::sqrt(data.weight[i]);
        double xk = 1.0;
        for (int k = 0; k < 6; ++k) {
            v(i, k) = w * xk;
            xk *= x;
        }
        rhs(i) = w * data.y[i];
    }
    const Eigen::VectorXd c = (v.transpose() * v).ldlt().solve(v.transpose() * rhs);
    std::array<double, 6> coeffs{};
    for (int k = 0; k < 6; ++k) coeffs[k] = c(k);
    return coeffs;
}

struct InnerFit {
    double nu = 0.0;
    std::array<double, 6> coeffs{};
    double chi2 = 0.0;
    bool converged = false;
};

InnerFit fit_at_candidate(const EnsembleTable& table, double p_c,
                          const CollapseOptions& options) {
    const FitData data = prepare_fit_data(table, p_c, options);
    const std::array<double, 6> c0 = seed_polynomial(data, options.nu_init);

    auto objective = [&](const std::vector<double>& params) {
        const double nu = params[0];
        if (nu < options.nu_min || nu > options.nu_max) {
            return kPenalty * (1.0 + std::abs(nu));
        }
        std::array<double, 6> coeffs{};
        std::copy(params.begin() + 1, params.end(), coeffs.begin());
        return chi2_at(data, nu, coeffs);
    };

    std::vector<double> start(7);
    start[0] = options.nu_init;
    std::vector<double> step(7);
    step[0] = 0.1;
    for (int k = 0; k < 6; ++k) {
        start[k + 1] = c0[k];
        step[k + 1] = 0.1 * std::abs(c0[k]) + 0.01;
    }
    NelderMeadOptions nm;
    nm.max_iterations = options.max_iterations;
    nm.tolerance = options.tolerance;
    const NelderMeadResult r = nelder_mead(objective, start, step, nm);

    InnerFit fit;
    fit.nu = r.x[0];
    std::copy(r.x.begin() + 1, r.x.end(), fit.coeffs.begin());
    fit.chi2 = r.value;
    fit.converged = r.converged;
    return fit;
}

void require_collapsible(const EnsembleTable& table) {
    if (table.kind != ValueKind::Entropy) {
        throw std::invalid_argument("collapse fit expects an entropy table");
    }
    if (table.sizes().size() < 3) {
        throw std::invalid_argument("collapse fit needs at least 3 distinct sizes");
    }
    if (table.rates().size() < 8) {
        throw std::invalid_argument("collapse fit needs at least 8 distinct rates");
    }
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Rate where the mean curves of the different sizes come closest: the
// seed for candidate refinement.
double crossing_seed(const EnsembleTable& table) {
    const std::vector<SizeCurve> curves = size_curves(table);
    double best_p = table.rates().front();
    double best_spread = std::numeric_limits<double>::infinity();
    for (double p : table.rates()) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        bool complete = true;
        for (const SizeCurve& curve : curves) {
            const auto it = std::lower_bound(curve.rates.begin(), curve.rates.end(), p);
            if (it == curve.rates.end() || *it != p) {
                complete = false;
                break;
            }
            const double m = curve.means[it - curve.rates.begin()];
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
        if (!complete) continue;
        const double spread = hi - lo;
        if (spread < best_spread) {
            best_spread = spread;
            best_p = p;
        }
    }
    return best_p;
}

void add_refined(std::vector<double>& candidates, double center, double spacing, int factor,
                 double lo, double hi) {
    for (int j = -factor; j <= factor; ++j) {
        const double p = center + j * spacing / factor;
        if (p < lo || p > hi) continue;
        const bool dup = std::any_of(candidates.begin(), candidates.end(),
                                     [&](double q) { return std::abs(q - p) < 1e-12; });
        if (!dup) candidates.push_back(p);
    }
}

}  // namespace

std::vector<RescaledPoint> rescale(const EnsembleTable& table, double p_c, double nu,
                                   const CollapseOptions& options) {
    if (nu <= 0.0) throw std::invalid_argument("nu must be positive");
    const std::vector<SizeCurve> curves = size_curves(table);
    std::map<int, double> at_pc;
    for (const SizeCurve& curve : curves) {
        at_pc[curve.num_qubits] = interpolate_mean(curve, p_c);
    }
    std::vector<RescaledPoint> points;
    for (const EnsembleRow& row : table.rows) {
        RescaledPoint pt;
        pt.num_qubits = row.num_qubits;
        pt.rate = row.rate;
        pt.x = std::pow(static_cast<double>(row.num_qubits), 1.0 / nu) * (row.rate - p_c);
        pt.y = row.value - at_pc.at(row.num_qubits);
        pt.sigma = row_sigma(row, options);
        points.push_back(pt);
    }
    return points;
}

CollapseFit fit_collapse(const EnsembleTable& table, std::vector<double> p_c_candidates,
                         const CollapseOptions& options) {
    require_collapsible(table);

    const std::vector<double> grid = table.rates();
    std::vector<double> diffs;
    for (size_t i = 1; i < grid.size(); ++i) diffs.push_back(grid[i] - grid[i - 1]);
    const double spacing = median(diffs);
    const double lo = grid.front();
    const double hi = grid.back();
    const int factor = std::max(2, options.refine_factor);

    const bool automatic = p_c_candidates.empty();
    if (automatic) {
        p_c_candidates = grid;
        add_refined(p_c_candidates, crossing_seed(table), spacing, factor, lo, hi);
    }

    CollapseFit best;
    best.chi2 = std::numeric_limits<double>::infinity();
    std::vector<double> seen;
    std::vector<double> seen_chi2;

    auto evaluate = [&](double p_c) {
        const bool dup = std::any_of(seen.begin(), seen.end(),
                                     [&](double q) { return std::abs(q - p_c) < 1e-12; });
        if (dup) return;
        const InnerFit fit = fit_at_candidate(table, p_c, options);
        seen.push_back(p_c);
        seen_chi2.push_back(fit.chi2);
        const bool better =
            fit.chi2 < best.chi2 || (fit.chi2 == best.chi2 && p_c < best.p_c);
        if (better) {
            best.p_c = p_c;
            best.nu = fit.nu;
            best.poly_coeffs = fit.coeffs;
            best.chi2 = fit.chi2;
            best.converged = fit.converged;
        }
    };

    for (double p_c : p_c_candidates) evaluate(p_c);
    if (automatic) {
        std::vector<double> stage2;
        add_refined(stage2, best.p_c, spacing / factor, factor, lo, hi);
        for (double p_c : stage2) evaluate(p_c);
    }

    best.dof = static_cast<int>(table.rows.size()) - 7;
    best.candidates = std::move(seen);
    best.candidate_chi2 = std::move(seen_chi2);
    return best;
}

double bootstrap_nu(const EnsembleTable& table, const RawTable& raw, double p_c, int k_boot,
                    uint64_t seed, const CollapseOptions& options) {
    if (k_boot < 2) throw std::invalid_argument("k_boot must be at least 2");
    for (const EnsembleRow& row : table.rows) {
        const RawCell* cell = raw.find(row.num_qubits, row.rate, row.separation);
        if (!cell || cell->values.size() < 2) {
            throw std::invalid_argument("raw samples missing for a table cell");
        }
    }

    std::vector<double> nus(k_boot);
    for (int k = 0; k < k_boot; ++k) {
        SplitMix64 rng(derive_seed(seed, static_cast<uint64_t>(k)));
        EnsembleTable resampled = table;
        for (EnsembleRow& row : resampled.rows) {
            const RawCell* cell = raw.find(row.num_qubits, row.rate, row.separation);
            const size_t n = cell->values.size();
            long double sum = 0.0L;
            long double sum_sq = 0.0L;
            for (size_t i = 0; i < n; ++i) {
                const double v = cell->values[rng.next_u64() % n];
                sum += v;
                sum_sq += static_cast<long double>(v) * v;
            }
            const long double mean = sum / static_cast<long double>(n);
            const long double var =
                std::max(0.0L, (sum_sq - static_cast<long double>(n) * mean * mean) /
                                   static_cast<long double>(n - 1));
            row.value = static_cast<double>(mean);
            row.std_dev = static_cast<double>(std::sqrt(var));
            row.std_error = row.std_dev / std::sqrt(static_cast<double>(n));
        }
        nus[k] = fit_at_candidate(resampled, p_c, options).nu;
    }

    long double mean = 0.0L;
    for (double v : nus) mean += v;
    mean /= k_boot;
    long double ss = 0.0L;
    for (double v : nus) {
        const long double d = v - mean;
        ss += d * d;
    }
    return static_cast<double>(std::sqrt(ss / (k_boot - 1)));
}

ExtrapolationFit extrapolate_nu(const std::vector<ExtrapolationPoint>& points) {
    if (points.size() < 2) throw std::invalid_argument("need at least 2 extrapolation points");
    ExtrapolationFit fit;
    fit.points = points;
    fit.weighted = std::all_of(points.begin(), points.end(),
                               [](const ExtrapolationPoint& pt) { return pt.std_err > 0.0; });

    long double sw = 0, su = 0, suu = 0, sv = 0, suv = 0;
    for (const ExtrapolationPoint& pt : points) {
        const long double w = fit.weighted ? 1.0L / (static_cast<long double>(pt.std_err) *
                                                     pt.std_err)
                                           : 1.0L;
        const long double u = 1.0L / pt.size_cap;
        sw += w;
        su += w * u;
        suu += w * u * u;
        sv += w * pt.nu;
        suv += w * u * pt.nu;
    }
    const long double denom = sw * suu - su * su;
    if (std::abs(static_cast<double>(denom)) < 1e-30) {
        throw std::invalid_argument("degenerate extrapolation design (all N' equal)");
    }
    fit.slope = static_cast<double>((sw * suv - su * sv) / denom);
    fit.intercept = static_cast<double>((suu * sv - su * suv) / denom);
    return fit;
}

GradVarCollapseFit fit_gradvar_collapse(const EnsembleTable& table, double p_c,
                                        const GradVarCollapseOptions& options) {
    if (table.kind != ValueKind::GradVariance) {
        throw std::invalid_argument("gradient-variance fit expects a grad_variance table");
    }

    GradVarCollapseFit fit;
    fit.p_c = p_c;
    std::vector<const EnsembleRow*> rows;
    for (const EnsembleRow& row : table.rows) {
        if (row.value > 0.0) {
            rows.push_back(&row);
        } else {
            ++fit.excluded_rows;
        }
    }

    std::vector<int> sizes;
    for (const EnsembleRow* row : rows) sizes.push_back(row->num_qubits);
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    const int num_plateaus = options.global_plateau ? 1 : static_cast<int>(sizes.size());
    const int num_params = 1 + num_plateaus;
    if (static_cast<int>(rows.size()) <= num_params) {
        throw std::invalid_argument("not enough positive-variance rows to fit");
    }

    auto plateau_index = [&](int n) {
        if (options.global_plateau) return 0;
        return static_cast<int>(std::lower_bound(sizes.begin(), sizes.end(), n) - sizes.begin());
    };

    // Plateau seeds: mean variance on the far side of p_c per size.
    std::vector<double> t0(num_plateaus, 0.0);
    {
        std::vector<double> sum(num_plateaus, 0.0);
        std::vector<int> count(num_plateaus, 0);
        for (const EnsembleRow* row : rows) {
            if (row->rate <= p_c) continue;
            sum[plateau_index(row->num_qubits)] += row->value;
            ++count[plateau_index(row->num_qubits)];
        }
        for (int s = 0; s < num_plateaus; ++s) {
            double fallback = 0.0;
            int fall_n = 0;
            for (const EnsembleRow* row : rows) {
                if (!options.global_plateau && plateau_index(row->num_qubits) != s) continue;
                fallback += row->value;
                ++fall_n;
            }
            const double c = count[s] > 0 ? sum[s] / count[s] : fallback / fall_n;
            t0[s] = std::log(std::max(c, 1e-12));
        }
    }

    std::vector<double> ln_v(rows.size());
    std::vector<double> weight(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        ln_v[i] = std::log(rows[i]->value);
        const double sigma_ln = rows[i]->std_error / rows[i]->value;
        weight[i] = 1.0 / std::max(sigma_ln * sigma_ln, 1e-12);
    }

    auto objective = [&](const std::vector<double>& params) {
        const double nu = params[0];
        if (nu < options.nu_min || nu > options.nu_max) {
            return kPenalty * (1.0 + std::abs(nu));
        }
        double chi2 = 0.0;
        for (size_t i = 0; i < rows.size(); ++i) {
            const EnsembleRow* row = rows[i];
            const double x =
                std::abs(row->rate - p_c) * std::pow(static_cast<double>(row->num_qubits),
                                                     1.0 / nu);
            const double h = std::exp(params[1 + plateau_index(row->num_qubits)]) + std::exp(-x);
            const double r = ln_v[i] - std::log(h);
            chi2 += weight[i] * r * r;
        }
        return chi2;
    };

    std::vector<double> start(num_params);
    std::vector<double> step(num_params, 0.5);
    start[0] = options.nu_init;
    step[0] = 0.1;
    for (int s = 0; s < num_plateaus; ++s) start[1 + s] = t0[s];

    NelderMeadOptions nm;
    nm.max_iterations = options.max_iterations;
    nm.tolerance = options.tolerance;
    const NelderMeadResult r = nelder_mead(objective, start, step, nm);

    fit.nu = r.x[0];
    fit.plateau_sizes = options.global_plateau ? std::vector<int>{0} : sizes;
    for (int s = 0; s < num_plateaus; ++s) fit.plateau.push_back(std::exp(r.x[1 + s]));
    fit.chi2 = r.value;
    fit.dof = static_cast<int>(rows.size()) - num_params;
    fit.converged = r.converged;
    return fit;
}

PeakResult mutual_info_peak(const EnsembleTable& table, int separation) {
    std::vector<const EnsembleRow*> rows;
    for (const EnsembleRow& row : table.rows) {
        if (row.separation == separation) rows.push_back(&row);
    }
    std::sort(rows.begin(), rows.end(), [](const EnsembleRow* a, const EnsembleRow* b) {
        return a->rate < b->rate;
    });
    if (rows.size() < 8) {
        throw std::invalid_argument("peak search needs at least 8 rate grid points");
    }

    const size_t n = rows.size();
    std::vector<double> smoothed(n);
    for (size_t i = 0; i < n; ++i) {
        double sum = rows[i]->value;
        int count = 1;
        if (i > 0) {
            sum += rows[i - 1]->value;
            ++count;
        }
        if (i + 1 < n) {
            sum += rows[i + 1]->value;
            ++count;
        }
        smoothed[i] = sum / count;
    }

    size_t arg = 0;
    for (size_t i = 1; i < n; ++i) {
        if (smoothed[i] > smoothed[arg]) arg = i;
    }

    std::vector<double> errs;
    for (const EnsembleRow* row : rows) errs.push_back(row->std_error);
    const double range =
        *std::max_element(smoothed.begin(), smoothed.end()) -
        *std::min_element(smoothed.begin(), smoothed.end());

    PeakResult peak;
    peak.rate = rows[arg]->rate;
    peak.value = smoothed[arg];
    peak.low_confidence = range <= 2.0 * median(errs);
    return peak;
}

}  // namespace mvqc
