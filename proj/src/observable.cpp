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

#include "mvqc/observable.hpp"

#include <bit>
#include <charconv>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace mvqc {

Observable Observable::zz(int a, int b) {
    Observable obs;
    obs.terms.push_back({1.0, {{a, Pauli::Z}, {b, Pauli::Z}}});
    return obs;
}

namespace {

char axis_letter(Pauli axis) {
    switch (axis) {
        case Pauli::X: return 'X';
        case Pauli::Y: return 'Y';
        case Pauli::Z: return 'Z';
    }
    return '?';
}

PauliTerm parse_term(const std::string& piece) {
    std::istringstream in(piece);
    PauliTerm term;
    std::string tok;
    bool first = true;
    bool saw_factor = false;
    while (in >> tok) {
        if (first && (tok[0] == '-' || tok[0] == '.' || (tok[0] >= '0' && tok[0] <= '9'))) {
            size_t pos = 0;
            term.coefficient = std::stod(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument("bad coefficient: " + tok);
            first = false;
            continue;
        }
        first = false;
        Pauli axis;
        switch (tok[0]) {
            case 'X': axis = Pauli::X; break;
            case 'Y': axis = Pauli::Y; break;
            case 'Z': axis = Pauli::Z; break;
            default: throw std::invalid_argument("bad Pauli factor: " + tok);
        }
        size_t pos = 0;
        const int qubit = std::stoi(tok.substr(1), &pos);
        if (pos != tok.size() - 1 || qubit < 0) {
            throw std::invalid_argument("bad Pauli factor: " + tok);
        }
        term.factors.push_back({qubit, axis});
        saw_factor = true;
    }
    if (!saw_factor && first) throw std::invalid_argument("empty observable term");
    return term;
}

}  // namespace

Observable Observable::parse(const std::string& text) {
    Observable obs;
    size_t start = 0;
    while (true) {
        const size_t plus = text.find('+', start);
        const std::string piece =
            plus == std::string::npos ? text.substr(start) : text.substr(start, plus - start);
        obs.terms.push_back(parse_term(piece));
        if (plus == std::string::npos) break;
        start = plus + 1;
    }
    return obs;
}

std::string Observable::to_string() const {
    std::string out;
    for (size_t t = 0; t < terms.size(); ++t) {
        if (t > 0) out += " + ";
        const PauliTerm& term = terms[t];
        bool need_space = false;
        if (term.coefficient != 1.0 || term.factors.empty()) {
            char buf[32];
            auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), term.coefficient);
            out.append(buf, end);
            need_space = true;
        }
        for (const PauliFactor& f : term.factors) {
            if (need_space) out += ' ';
            out += axis_letter(f.axis);
            out += std::to_string(f.qubit);
            need_space = true;
        }
    }
    return out;
}

double expectation(const StateVector& state, const Observable& obs) {
    const size_t dim = state.dim();
    const auto& amp = state.amplitudes();
    long double total = 0.0L;
    for (const PauliTerm& term : obs.terms) {
        size_t flip = 0;
        size_t z_mask = 0;
        size_t y_mask = 0;
        size_t seen = 0;
        for (const PauliFactor& f : term.factors) {
            if (f.qubit < 0 || f.qubit >= state.num_qubits()) {
                throw std::out_of_range("observable qubit out of range");
            }
            const size_t bit = size_t{1} << f.qubit;
            if (seen & bit) throw std::invalid_argument("duplicate qubit in Pauli term");
            seen |= bit;
            switch (f.axis) {
                case Pauli::X: flip |= bit; break;
                case Pauli::Y:
                    flip |= bit;
                    y_mask |= bit;
                    break;
                case Pauli::Z: z_mask |= bit; break;
            }
        }
        // P|i> = phase(i) |i ^ flip| with phase from the Z parity and the
        // Y factors: Y|0> = i|1>, Y|1> = -i|0>.
        const int y_count = std::popcount(y_mask);
        std::complex<long double> sum{0.0L, 0.0L};
        for (size_t i = 0; i < dim; ++i) {
            const int z_par = std::popcount(i & z_mask) & 1;
            const int y_ones = std::popcount(i & y_mask);
            // Product of Y phases: i^{y_count} * (-1)^{y_ones}.
            int quarter = (y_count + 2 * (y_ones + z_par)) & 3;
            const std::complex<long double> a =
                std::conj(std::complex<long double>(amp[i ^ flip])) *
                std::complex<long double>(amp[i]);
            switch (quarter) {
                case 0: sum += a; break;
                case 1: sum += std::complex<long double>(-a.imag(), a.real()); break;
                case 2: sum -= a; break;
                case 3: sum += std::complex<long double>(a.imag(), -a.real()); break;
            }
        }
        total += static_cast<long double>(term.coefficient) * sum.real();
    }
    return static_cast<double>(total);
}

}  // namespace mvqc
