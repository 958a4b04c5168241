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

#include "mvqc/ensemble_table.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mvqc {

const char* value_kind_name(ValueKind kind) {
    switch (kind) {
        case ValueKind::Entropy: return "entropy";
        case ValueKind::GradVariance: return "grad_variance";
        case ValueKind::MutualInfo: return "mutual_info";
    }
    throw std::invalid_argument("unknown value kind");
}

ValueKind value_kind_from_name(const std::string& name) {
    if (name == "entropy") return ValueKind::Entropy;
    if (name == "grad_variance") return ValueKind::GradVariance;
    if (name == "mutual_info") return ValueKind::MutualInfo;
    throw std::invalid_argument("unknown value kind: " + name);
}

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, end);
}

double parse_double(const std::string& text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::runtime_error("bad number: '" + text + "'");
    }
    return value;
}

namespace {

long parse_int(const std::string& text) {
    long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::runtime_error("bad integer: '" + text + "'");
    }
    return value;
}

uint64_t parse_hex(const std::string& text) {
    uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, 16);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::runtime_error("bad hex value: '" + text + "'");
    }
    return value;
}

std::string format_hex(uint64_t value) {
    char buf[17];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, 16);
    return std::string(buf, end);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const size_t first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const size_t last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

struct Metadata {
    std::string schema;
    std::string kind;
    uint64_t seed = 0;
    uint64_t config_hash = 0;
};

// Returns false when the line is not metadata.
bool consume_metadata(const std::string& line, Metadata& meta) {
    if (line.empty() || line[0] != '#') return false;
    const std::string body = trim(line.substr(1));
    const size_t colon = body.find(':');
    if (colon == std::string::npos) return true;  // free-form comment
    const std::string key = trim(body.substr(0, colon));
    const std::string value = trim(body.substr(colon + 1));
    if (key == "schema") meta.schema = value;
    else if (key == "kind") meta.kind = value;
    else if (key == "seed") meta.seed = static_cast<uint64_t>(parse_int(value));
    else if (key == "config_hash") meta.config_hash = parse_hex(value);
    return true;
}

void check_schema(const Metadata& meta, const std::string& expected) {
    if (meta.schema != expected) {
        throw std::runtime_error("unsupported table schema: '" + meta.schema + "' (expected " +
                                 expected + ")");
    }
}

const char* kTableHeader = "family,N,p,L,R,r,value,std,stderr";
const char* kRawHeader = "N,p,r,sample,value";

}  // namespace

std::vector<int> EnsembleTable::sizes() const {
    std::vector<int> out;
    for (const EnsembleRow& row : rows) out.push_back(row.num_qubits);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<double> EnsembleTable::rates() const {
    std::vector<double> out;
    for (const EnsembleRow& row : rows) out.push_back(row.rate);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

const EnsembleRow* EnsembleTable::find(int num_qubits, double rate, int separation) const {
    for (const EnsembleRow& row : rows) {
        if (row.num_qubits == num_qubits && row.rate == rate && row.separation == separation) {
            return &row;
        }
    }
    return nullptr;
}

const RawCell* RawTable::find(int num_qubits, double rate, int separation) const {
    for (const RawCell& cell : cells) {
        if (cell.num_qubits == num_qubits && cell.rate == rate &&
            cell.separation == separation) {
            return &cell;
        }
    }
    return nullptr;
}

void write_table_csv(const EnsembleTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "# schema: mvqc-table-" << kTableSchemaVersion << "\n";
    out << "# kind: " << value_kind_name(table.kind) << "\n";
    out << "# seed: " << table.seed << "\n";
    out << "# config_hash: " << format_hex(table.config_hash) << "\n";
    out << kTableHeader << "\n";
    for (const EnsembleRow& row : table.rows) {
        out << row.family << ',' << row.num_qubits << ',' << format_double(row.rate) << ','
            << row.depth << ',' << row.num_samples << ',' << row.separation << ','
            << format_double(row.value) << ',' << format_double(row.std_dev) << ','
            << format_double(row.std_error) << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

EnsembleTable read_table_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    Metadata meta;
    EnsembleTable table;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (consume_metadata(line, meta)) continue;
        if (trim(line).empty()) continue;
        if (!header_seen) {
            if (line != kTableHeader) {
                throw std::runtime_error("unexpected table header: '" + line + "'");
            }
            header_seen = true;
            continue;
        }
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 9) throw std::runtime_error("bad table row: '" + line + "'");
        EnsembleRow row;
        row.family = f[0];
        row.num_qubits = static_cast<int>(parse_int(f[1]));
        row.rate = parse_double(f[2]);
        row.depth = static_cast<int>(parse_int(f[3]));
        row.num_samples = static_cast<int>(parse_int(f[4]));
        row.separation = static_cast<int>(parse_int(f[5]));
        row.value = parse_double(f[6]);
        row.std_dev = parse_double(f[7]);
        row.std_error = parse_double(f[8]);
        table.rows.push_back(std::move(row));
    }
    check_schema(meta, "mvqc-table-" + std::to_string(kTableSchemaVersion));
    if (!header_seen) throw std::runtime_error("missing table header in " + path);
    table.kind = value_kind_from_name(meta.kind);
    table.seed = meta.seed;
    table.config_hash = meta.config_hash;
    return table;
}

void write_raw_csv(const RawTable& raw, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "# schema: mvqc-raw-" << kTableSchemaVersion << "\n";
    out << "# kind: " << value_kind_name(raw.kind) << "\n";
    out << "# seed: " << raw.seed << "\n";
    out << "# config_hash: " << format_hex(raw.config_hash) << "\n";
    out << kRawHeader << "\n";
    for (const RawCell& cell : raw.cells) {
        for (size_t k = 0; k < cell.values.size(); ++k) {
            out << cell.num_qubits << ',' << format_double(cell.rate) << ',' << cell.separation
                << ',' << k << ',' << format_double(cell.values[k]) << "\n";
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

RawTable read_raw_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    Metadata meta;
    RawTable raw;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (consume_metadata(line, meta)) continue;
        if (trim(line).empty()) continue;
        if (!header_seen) {
            if (line != kRawHeader) {
                throw std::runtime_error("unexpected raw header: '" + line + "'");
            }
            header_seen = true;
            continue;
        }
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 5) throw std::runtime_error("bad raw row: '" + line + "'");
        const int n = static_cast<int>(parse_int(f[0]));
        const double rate = parse_double(f[1]);
        const int sep = static_cast<int>(parse_int(f[2]));
        const size_t sample = static_cast<size_t>(parse_int(f[3]));
        RawCell* cell = nullptr;
        if (!raw.cells.empty()) {
            RawCell& last = raw.cells.back();
            if (last.num_qubits == n && last.rate == rate && last.separation == sep) {
                cell = &last;
            }
        }
        if (!cell) {
            raw.cells.push_back({n, rate, sep, {}});
            cell = &raw.cells.back();
        }
        if (sample != cell->values.size()) {
            throw std::runtime_error("raw sample indices out of order in " + path);
        }
        cell->values.push_back(parse_double(f[4]));
    }
    check_schema(meta, "mvqc-raw-" + std::to_string(kTableSchemaVersion));
    if (!header_seen) throw std::runtime_error("missing raw header in " + path);
    raw.kind = value_kind_from_name(meta.kind);
    raw.seed = meta.seed;
    raw.config_hash = meta.config_hash;
    return raw;
}

}  // namespace mvqc
