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

#include "mvqc/nelder_mead.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mvqc {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             const std::vector<double>& start, const std::vector<double>& step,
                             const NelderMeadOptions& options) {
    const size_t n = start.size();
    if (n == 0 || step.size() != n) throw std::invalid_argument("bad simplex dimensions");

    std::vector<std::vector<double>> verts(n + 1, start);
    for (size_t i = 0; i < n; ++i) {
        if (step[i] == 0.0) throw std::invalid_argument("zero initial simplex step");
        verts[i + 1][i] += step[i];
    }
    std::vector<double> values(n + 1);
    for (size_t i = 0; i <= n; ++i) values[i] = objective(verts[i]);

    std::vector<size_t> order(n + 1);
    NelderMeadResult result;
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        std::iota(order.begin(), order.end(), size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](size_t a, size_t b) { return values[a] < values[b]; });
        const size_t best = order[0];
        const size_t worst = order[n];
        const size_t second_worst = order[n - 1];

        result.iterations = iter;
        if (values[worst] - values[best] < options.tolerance) {
            result.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (size_t d = 0; d < n; ++d) centroid[d] += verts[i][d];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        auto blend = [&](double coeff) {
            std::vector<double> x(n);
            for (size_t d = 0; d < n; ++d) {
                x[d] = centroid[d] + coeff * (verts[worst][d] - centroid[d]);
            }
            return x;
        };

        const std::vector<double> reflected = blend(-options.reflection);
        const double f_reflected = objective(reflected);

        if (f_reflected < values[best]) {
            const std::vector<double> expanded = blend(-options.expansion);
            const double f_expanded = objective(expanded);
            if (f_expanded < f_reflected) {
                verts[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                verts[worst] = reflected;
                values[worst] = f_reflected;
            }
        } else if (f_reflected < values[second_worst]) {
            verts[worst] = reflected;
            values[worst] = f_reflected;
        } else {
            const bool outside = f_reflected < values[worst];
            const std::vector<double> contracted =
                blend(outside ? -options.contraction : options.contraction);
            const double f_contracted = objective(contracted);
            if (f_contracted < std::min(f_reflected, values[worst])) {
                verts[worst] = contracted;
                values[worst] = f_contracted;
            } else {
                for (size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (size_t d = 0; d < n; ++d) {
                        verts[i][d] =
                            verts[best][d] + options.shrink * (verts[i][d] - verts[best][d]);
                    }
                    values[i] = objective(verts[i]);
                }
            }
        }
    }

    const size_t winner = static_cast<size_t>(
        std::min_element(values.begin(), values.end()) - values.begin());
    result.x = verts[winner];
    result.value = values[winner];
    return result;
}

}  // namespace mvqc
