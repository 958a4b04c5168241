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

#include "mvqc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mvqc/observable.hpp"

namespace mvqc {
namespace {

constexpr int kDeskMaxQubits = 12;
constexpr int kPaperMaxQubits = 18;
constexpr int kDeskSamples = 500;
constexpr int kPaperSamples = 3000;

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

double parse_real(const std::string& key, const std::string& text) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
        throw ConfigError("config: bad number for '" + key + "': " + text);
    return value;
}

long long parse_integer(const std::string& key, const std::string& text) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ConfigError("config: bad integer for '" + key + "': " + text);
    return value;
}

uint64_t parse_seed(const std::string& key, const std::string& text) {
    uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ConfigError("config: bad seed for '" + key + "': " + text);
    return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "on") return true;
    if (text == "false" || text == "0" || text == "off") return false;
    throw ConfigError("config: bad boolean for '" + key + "': " + text);
}

// "a:b:step" inclusive grid, or a comma list.
std::vector<double> parse_real_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        auto parts = split(text, ':');
        if (parts.size() != 3)
            throw ConfigError("config: range for '" + key + "' must be start:stop:step");
        double start = parse_real(key, parts[0]);
        double stop = parse_real(key, parts[1]);
        double step = parse_real(key, parts[2]);
        if (step <= 0.0 || stop < start)
            throw ConfigError("config: bad range for '" + key + "': " + text);
        for (int i = 0;; ++i) {
            double v = start + i * step;
            if (v > stop + step * 0.5) break;
            out.push_back(std::min(v, stop));
        }
        return out;
    }
    for (const auto& item : split(text, ','))
        out.push_back(parse_real(key, item));
    return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& text) {
    std::vector<int> out;
    if (text.find(':') != std::string::npos) {
        auto parts = split(text, ':');
        if (parts.size() != 3)
            throw ConfigError("config: range for '" + key + "' must be start:stop:step");
        long long start = parse_integer(key, parts[0]);
        long long stop = parse_integer(key, parts[1]);
        long long step = parse_integer(key, parts[2]);
        if (step <= 0 || stop < start)
            throw ConfigError("config: bad range for '" + key + "': " + text);
        for (long long v = start; v <= stop; v += step) out.push_back(static_cast<int>(v));
        return out;
    }
    for (const auto& item : split(text, ','))
        out.push_back(static_cast<int>(parse_integer(key, item)));
    return out;
}

std::string format_real(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string join_reals(const std::vector<double>& values) {
    std::string out;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_real(values[i]);
    }
    return out;
}

std::string join_ints(const std::vector<int>& values) {
    std::string out;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

void require_sorted_unique(const std::string& key, const std::vector<double>& values) {
    for (size_t i = 1; i < values.size(); ++i)
        if (values[i] <= values[i - 1] + 1e-12)
            throw ConfigError("config: '" + key + "' must be strictly increasing");
}

}  // namespace

uint64_t fnv1a64(const std::string& text) {
    uint64_t hash = 14695981039346656037ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return from_string(text.str());
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash_pos = line.find('#'); hash_pos != std::string::npos)
            line.resize(hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(line_no) +
                              " is not key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config: line " + std::to_string(line_no) +
                              " has an empty key or value");

        if (key == "family") {
            try {
                cfg.family = family_from_name(value);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("config: ") + e.what());
            }
        } else if (key == "sizes") {
            cfg.sizes = parse_int_list(key, value);
        } else if (key == "depth") {
            cfg.depth = static_cast<int>(parse_integer(key, value));
        } else if (key == "rates") {
            cfg.rates = parse_real_list(key, value);
        } else if (key == "samples") {
            cfg.samples = static_cast<int>(parse_integer(key, value));
        } else if (key == "seed") {
            cfg.seed = parse_seed(key, value);
        } else if (key == "observable") {
            cfg.observable = value;
        } else if (key == "param_index") {
            cfg.param_index = static_cast<int>(parse_integer(key, value));
        } else if (key == "separations") {
            cfg.separations = parse_int_list(key, value);
        } else if (key == "hea_cnot_wrap") {
            cfg.hea_cnot_wrap = parse_bool(key, value);
        } else if (key == "per_layer") {
            cfg.per_layer = parse_bool(key, value);
        } else if (key == "entropy_units") {
            if (value != "nats" && value != "bits")
                throw ConfigError("config: entropy_units must be nats or bits");
            cfg.entropy_units = value;
        } else if (key == "chi2_power") {
            cfg.chi2_power = static_cast<int>(parse_integer(key, value));
        } else if (key == "sigma") {
            if (value != "stderr" && value != "std")
                throw ConfigError("config: sigma must be stderr or std");
            cfg.sigma = value;
        } else if (key == "k_boot") {
            cfg.k_boot = static_cast<int>(parse_integer(key, value));
        } else if (key == "nu_init") {
            cfg.nu_init = parse_real(key, value);
        } else if (key == "gradvar_global_plateau") {
            cfg.gradvar_global_plateau = parse_bool(key, value);
        } else {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    return cfg;
}

std::string ExperimentConfig::serialize() const {
    std::ostringstream out;
    out << "chi2_power = " << chi2_power << '\n';
    out << "depth = " << depth << '\n';
    out << "entropy_units = " << entropy_units << '\n';
    out << "family = " << family_name(family) << '\n';
    out << "gradvar_global_plateau = " << (gradvar_global_plateau ? "true" : "false") << '\n';
    out << "hea_cnot_wrap = " << (hea_cnot_wrap ? "true" : "false") << '\n';
    out << "k_boot = " << k_boot << '\n';
    out << "nu_init = " << format_real(nu_init) << '\n';
    out << "observable = " << observable << '\n';
    out << "param_index = " << param_index << '\n';
    out << "per_layer = " << (per_layer ? "true" : "false") << '\n';
    if (!rates.empty()) out << "rates = " << join_reals(rates) << '\n';
    out << "samples = " << samples << '\n';
    out << "seed = " << seed << '\n';
    if (!separations.empty()) out << "separations = " << join_ints(separations) << '\n';
    out << "sigma = " << sigma << '\n';
    if (!sizes.empty()) out << "sizes = " << join_ints(sizes) << '\n';
    return out.str();
}

uint64_t ExperimentConfig::hash() const { return fnv1a64(serialize()); }

ExperimentConfig ExperimentConfig::resolved(Command command, bool paper_scale) const {
    ExperimentConfig cfg = *this;
    if (cfg.samples == 0) cfg.samples = paper_scale ? kPaperSamples : kDeskSamples;
    if (cfg.samples < 2) throw ConfigError("config: samples must be at least 2");
    if (cfg.depth < 1 || cfg.depth > 256)
        throw ConfigError("config: depth must be in [1, 256]");
    if (cfg.chi2_power != 1 && cfg.chi2_power != 2)
        throw ConfigError("config: chi2_power must be 1 or 2");
    if (cfg.k_boot < 2) throw ConfigError("config: k_boot must be at least 2");
    if (!(cfg.nu_init > 0.0)) throw ConfigError("config: nu_init must be positive");

    if (command == Command::MutInfo && cfg.sizes.empty())
        cfg.sizes = {paper_scale ? 16 : 12};
    if (cfg.sizes.empty()) throw ConfigError("config: sizes is required");
    const int max_qubits = paper_scale ? kPaperMaxQubits : kDeskMaxQubits;
    for (int n : cfg.sizes) {
        if (n < 2 || n > max_qubits)
            throw ConfigError("config: size " + std::to_string(n) + " outside [2, " +
                              std::to_string(max_qubits) + "]" +
                              (paper_scale ? "" : " (use --paper-scale for larger sizes)"));
        bool needs_even = cfg.family == CircuitFamily::XxzHva || command != Command::GradVar;
        if (needs_even && n % 2 != 0)
            throw ConfigError("config: size " + std::to_string(n) +
                              " must be even for this family/command");
    }
    for (size_t i = 1; i < cfg.sizes.size(); ++i)
        if (cfg.sizes[i] <= cfg.sizes[i - 1])
            throw ConfigError("config: sizes must be strictly increasing");

    if (cfg.rates.empty()) throw ConfigError("config: rates is required");
    require_sorted_unique("rates", cfg.rates);
    for (double p : cfg.rates)
        if (p < 0.0 || p > 1.0)
            throw ConfigError("config: rates must lie in [0, 1]");

    if (command == Command::MutInfo) {
        if (cfg.sizes.size() != 1)
            throw ConfigError("config: mutinfo uses exactly one size");
        const int n = cfg.sizes[0];
        if (cfg.separations.empty())
            for (int r = 1; r <= n / 2; ++r) cfg.separations.push_back(r);
        for (int r : cfg.separations)
            if (r < 1 || r > n / 2)
                throw ConfigError("config: separations must lie in [1, N/2]");
        for (size_t i = 1; i < cfg.separations.size(); ++i)
            if (cfg.separations[i] <= cfg.separations[i - 1])
                throw ConfigError("config: separations must be strictly increasing");
    } else {
        cfg.separations.clear();
    }

    if (command == Command::GradVar) {
        Observable obs;
        try {
            obs = Observable::parse(cfg.observable);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        int min_size = cfg.sizes.front();
        for (const auto& term : obs.terms)
            for (const auto& factor : term.factors)
                if (factor.qubit >= min_size)
                    throw ConfigError("config: observable touches qubit " +
                                      std::to_string(factor.qubit) +
                                      " but the smallest size is " +
                                      std::to_string(min_size));
        int min_params = param_count(cfg.family, min_size, cfg.depth);
        if (cfg.param_index < 0 || cfg.param_index >= min_params)
            throw ConfigError("config: param_index outside [0, " +
                              std::to_string(min_params) + ")");
    }
    return cfg;
}

}  // namespace mvqc
