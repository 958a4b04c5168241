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

#include <cstdint>
#include <string>
#include <vector>

namespace mvqc {

// Interchange tables between the experiment driver and the fitting code.
// On disk: comma-separated with a header row and '#'-prefixed metadata
// lines (schema version, value kind, config hash, seed). Doubles are
// written in shortest round-trip form, so read-back is exact.

inline constexpr int kTableSchemaVersion = 1;

enum class ValueKind { Entropy, GradVariance, MutualInfo };

const char* value_kind_name(ValueKind kind);
ValueKind value_kind_from_name(const std::string& name);

// One (N, p[, r]) cell: `value` is the ensemble mean (entropy, mutual
// information) or the sample variance (gradient kind); `std_dev` the
// sample standard deviation of the per-realization values; `std_error`
// the error bar on `value` (standard error of the mean, or the bootstrap
// standard error for the gradient-variance kind).
struct EnsembleRow {
    std::string family;
    int num_qubits = 0;
    double rate = 0.0;
    int depth = 0;
    int num_samples = 0;
    int separation = 0;  // site distance r for mutual-information rows, else 0
    double value = 0.0;
    double std_dev = 0.0;
    double std_error = 0.0;
};

struct EnsembleTable {
    ValueKind kind = ValueKind::Entropy;
    uint64_t seed = 0;
    uint64_t config_hash = 0;
    std::vector<EnsembleRow> rows;

    std::vector<int> sizes() const;      // distinct N, ascending
    std::vector<double> rates() const;   // distinct p, ascending
    const EnsembleRow* find(int num_qubits, double rate, int separation = 0) const;
};

// Raw per-realization values, required by bootstrap resampling.
struct RawCell {
    int num_qubits = 0;
    double rate = 0.0;
    int separation = 0;
    std::vector<double> values;
};

struct RawTable {
    ValueKind kind = ValueKind::Entropy;
    uint64_t seed = 0;
    uint64_t config_hash = 0;
    std::vector<RawCell> cells;

    const RawCell* find(int num_qubits, double rate, int separation = 0) const;
};

void write_table_csv(const EnsembleTable& table, const std::string& path);
EnsembleTable read_table_csv(const std::string& path);

void write_raw_csv(const RawTable& raw, const std::string& path);
RawTable read_raw_csv(const std::string& path);

// Shortest round-trip decimal form (also used by the table writers).
std::string format_double(double value);
double parse_double(const std::string& text);  // throws on trailing garbage

}  // namespace mvqc
