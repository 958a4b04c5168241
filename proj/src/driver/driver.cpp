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

#include "mvqc/driver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "mvqc/entanglement.hpp"
#include "mvqc/gradients.hpp"
#include "mvqc/trajectory.hpp"

namespace mvqc {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kManifestSchema = 1;
// Seed-space offset for aggregation-time bootstraps, clear of the
// per-sample indices (group * samples + k).
constexpr uint64_t kBootstrapSalt = uint64_t{1} << 40;

const char* kResampleNote =
    "each realization independently redraws the circuit parameters and the "
    "measurement positions; the quoted error bars cover both sources of "
    "randomness jointly";

std::string hex64(uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

// One table cell group: a single work unit fills every target at once
// (the mutual-information command reuses one trajectory for all r).
struct GroupSpec {
    int num_qubits = 0;
    double rate = 0.0;
    std::vector<int> separations;  // empty: one target with r = 0

    int num_targets() const {
        return separations.empty() ? 1 : static_cast<int>(separations.size());
    }
    int target_r(int t) const { return separations.empty() ? 0 : separations[t]; }
};

struct UnitOut {
    std::vector<double> values;
    std::vector<double> layers;
};

struct Job {
    std::string command;
    ValueKind kind = ValueKind::Entropy;
    ExperimentConfig cfg;  // resolved
    std::string file_stem;
    std::vector<GroupSpec> groups;
    bool track_layers = false;
    std::function<UnitOut(const GroupSpec&, uint64_t seed)> unit;
};

struct GroupData {
    std::vector<std::vector<double>> values;  // [target][sample]
    std::vector<std::vector<double>> layers;  // [sample][layer]
    bool complete = false;
};

struct Stats {
    double mean = 0.0;
    double sd = 0.0;
    double se = 0.0;
};

Stats mean_stats(const std::vector<double>& values) {
    Stats s;
    long double acc = 0.0L;
    for (double v : values) acc += v;
    s.mean = static_cast<double>(acc / static_cast<long double>(values.size()));
    s.sd = std::sqrt(sample_variance(values));
    s.se = s.sd / std::sqrt(static_cast<double>(values.size()));
    return s;
}

double bootstrap_variance_stderr(const std::vector<double>& values, int k_boot, uint64_t seed) {
    const size_t n = values.size();
    std::vector<double> boot(k_boot);
    std::vector<double> resample(n);
    for (int b = 0; b < k_boot; ++b) {
        SplitMix64 rng(derive_seed(seed, static_cast<uint64_t>(b)));
        for (size_t i = 0; i < n; ++i) resample[i] = values[rng.next_u64() % n];
        boot[b] = sample_variance(resample);
    }
    return std::sqrt(sample_variance(boot));
}

json manifest_json(const Job& job, const std::vector<GroupData>& data) {
    json m;
    m["schema"] = kManifestSchema;
    m["tool"] = "mvqc";
    m["command"] = job.command;
    m["kind"] = value_kind_name(job.kind);
    m["seed"] = job.cfg.seed;
    m["config_hash"] = hex64(job.cfg.hash());
    m["config"] = job.cfg.serialize();
    m["notes"] = json::array({kResampleNote});
    json groups = json::array();
    for (size_t g = 0; g < job.groups.size(); ++g) {
        const GroupSpec& spec = job.groups[g];
        json jg;
        jg["N"] = spec.num_qubits;
        jg["p"] = spec.rate;
        jg["complete"] = data[g].complete;
        if (data[g].complete) {
            json targets = json::array();
            for (int t = 0; t < spec.num_targets(); ++t) {
                json jt;
                jt["r"] = spec.target_r(t);
                jt["values"] = data[g].values[t];
                targets.push_back(std::move(jt));
            }
            jg["targets"] = std::move(targets);
            if (job.track_layers) jg["layers"] = data[g].layers;
        }
        groups.push_back(std::move(jg));
    }
    m["groups"] = std::move(groups);
    return m;
}

void write_text_file(const fs::path& path, const std::string& text) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << text;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

void write_manifest(const fs::path& path, const Job& job, const std::vector<GroupData>& data) {
    write_text_file(path, manifest_json(job, data).dump() + "\n");
}

// Loads completed cells from an earlier manifest. Identity fields must
// match the resolved config exactly; anything else is a refused resume.
void load_manifest(const fs::path& path, const Job& job, std::vector<GroupData>& data) {
    json m;
    try {
        std::ifstream in(path);
        in >> m;
    } catch (const std::exception& e) {
        throw ConfigError("resume: cannot parse " + path.string() + ": " + e.what());
    }
    auto expect = [&](const char* key, const json& want) {
        if (!m.contains(key) || m[key] != want)
            throw ConfigError("resume: manifest " + path.string() + " does not match this run (" +
                              key + " differs); delete it or change --out");
    };
    expect("schema", kManifestSchema);
    expect("tool", "mvqc");
    expect("command", job.command);
    expect("seed", job.cfg.seed);
    expect("config_hash", hex64(job.cfg.hash()));
    expect("config", job.cfg.serialize());

    const auto& groups = m.at("groups");
    if (!groups.is_array() || groups.size() != job.groups.size())
        throw ConfigError("resume: manifest cell list does not match this run");
    const int samples = job.cfg.samples;
    for (size_t g = 0; g < job.groups.size(); ++g) {
        const json& jg = groups[g];
        const GroupSpec& spec = job.groups[g];
        if (jg.at("N").get<int>() != spec.num_qubits ||
            jg.at("p").get<double>() != spec.rate)
            throw ConfigError("resume: manifest cell order does not match this run");
        if (!jg.at("complete").get<bool>()) continue;
        const json& targets = jg.at("targets");
        if (static_cast<int>(targets.size()) != spec.num_targets())
            throw ConfigError("resume: manifest targets do not match this run");
        for (int t = 0; t < spec.num_targets(); ++t) {
            const json& jt = targets[t];
            if (jt.at("r").get<int>() != spec.target_r(t))
                throw ConfigError("resume: manifest targets do not match this run");
            auto values = jt.at("values").get<std::vector<double>>();
            if (static_cast<int>(values.size()) != samples)
                throw ConfigError("resume: manifest sample count does not match this run");
            data[g].values[t] = std::move(values);
        }
        if (job.track_layers) {
            auto layers = jg.at("layers").get<std::vector<std::vector<double>>>();
            if (static_cast<int>(layers.size()) != samples)
                throw ConfigError("resume: manifest layer records do not match this run");
            data[g].layers = std::move(layers);
        }
        data[g].complete = true;
    }
}

void write_layers_csv(const Job& job, const std::vector<GroupData>& data, double scale,
                      const fs::path& path) {
    std::ostringstream out;
    out << "# schema: mvqc-layers-1\n";
    out << "# kind: entropy_per_layer\n";
    out << "# seed: " << job.cfg.seed << "\n";
    out << "# config_hash: " << hex64(job.cfg.hash()) << "\n";
    out << "family,N,p,L,R,layer,value,std,stderr\n";
    const int samples = job.cfg.samples;
    std::vector<double> column(samples);
    for (size_t g = 0; g < job.groups.size(); ++g) {
        const GroupSpec& spec = job.groups[g];
        for (int layer = 0; layer < job.cfg.depth; ++layer) {
            for (int k = 0; k < samples; ++k) column[k] = data[g].layers[k][layer];
            Stats s = mean_stats(column);
            out << family_name(job.cfg.family) << ',' << spec.num_qubits << ','
                << format_double(spec.rate) << ',' << job.cfg.depth << ',' << samples << ','
                << layer << ',' << format_double(s.mean * scale) << ','
                << format_double(s.sd * scale) << ',' << format_double(s.se * scale) << "\n";
        }
    }
    write_text_file(path, out.str());
}

int run_job(const Job& job, const DriverOptions& opt) {
    fs::create_directories(opt.out_dir);
    const fs::path base = fs::path(opt.out_dir) / job.file_stem;
    fs::path manifest_path = base;
    manifest_path += ".manifest.json";

    const int samples = job.cfg.samples;
    const size_t num_groups = job.groups.size();
    std::vector<GroupData> data(num_groups);
    for (size_t g = 0; g < num_groups; ++g) {
        data[g].values.assign(job.groups[g].num_targets(), std::vector<double>(samples));
        if (job.track_layers) data[g].layers.assign(samples, {});
    }

    if (opt.resume && fs::exists(manifest_path)) {
        load_manifest(manifest_path, job, data);
    } else if (opt.resume && !opt.quiet) {
        std::cout << job.command << ": no manifest at " << manifest_path.string()
                  << ", starting fresh\n";
    }

    std::vector<size_t> pending;
    for (size_t g = 0; g < num_groups; ++g)
        if (!data[g].complete) pending.push_back(g);
    const size_t left_behind =
        (opt.max_cells > 0 && pending.size() > static_cast<size_t>(opt.max_cells))
            ? pending.size() - opt.max_cells
            : 0;
    if (left_behind > 0) pending.resize(opt.max_cells);

    if (!pending.empty()) {
        const size_t total = pending.size() * static_cast<size_t>(samples);
        std::atomic<size_t> next{0};
        std::vector<std::unique_ptr<std::atomic<int>>> remaining;
        remaining.reserve(pending.size());
        for (size_t i = 0; i < pending.size(); ++i)
            remaining.push_back(std::make_unique<std::atomic<int>>(samples));

        std::mutex mu;
        std::condition_variable cv;
        std::vector<size_t> completed_queue;
        bool failed = false;
        std::string error_msg;
        std::atomic<bool> stop{false};

        auto worker = [&] {
            try {
                for (;;) {
                    if (stop.load(std::memory_order_relaxed)) break;
                    const size_t t = next.fetch_add(1, std::memory_order_relaxed);
                    if (t >= total) break;
                    const size_t pi = t / samples;
                    const int k = static_cast<int>(t % samples);
                    const size_t g = pending[pi];
                    // Seeds index the full task grid, so resumed and
                    // truncated runs reproduce the fresh run exactly.
                    const uint64_t unit =
                        static_cast<uint64_t>(g) * static_cast<uint64_t>(samples) +
                        static_cast<uint64_t>(k);
                    UnitOut out = job.unit(job.groups[g], derive_seed(job.cfg.seed, unit));
                    for (int tt = 0; tt < job.groups[g].num_targets(); ++tt)
                        data[g].values[tt][k] = out.values[tt];
                    if (job.track_layers) data[g].layers[k] = std::move(out.layers);
                    if (remaining[pi]->fetch_sub(1, std::memory_order_acq_rel) == 1) {
                        std::lock_guard<std::mutex> lock(mu);
                        completed_queue.push_back(g);
                        cv.notify_one();
                    }
                }
            } catch (const std::exception& e) {
                stop.store(true, std::memory_order_relaxed);
                std::lock_guard<std::mutex> lock(mu);
                if (!failed) error_msg = e.what();
                failed = true;
                cv.notify_one();
            }
        };

        const int threads = std::max(1, opt.threads);
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);

        size_t done = 0;
        bool aborted = false;
        while (done < pending.size()) {
            std::vector<size_t> batch;
            {
                std::unique_lock<std::mutex> lock(mu);
                cv.wait(lock, [&] { return !completed_queue.empty() || failed; });
                batch = std::move(completed_queue);
                completed_queue.clear();
                if (failed && batch.empty()) {
                    aborted = true;
                    break;
                }
            }
            for (size_t g : batch) {
                data[g].complete = true;
                ++done;
                if (!opt.quiet) {
                    const GroupSpec& spec = job.groups[g];
                    std::cout << job.command << ": N=" << spec.num_qubits
                              << " p=" << format_double(spec.rate) << " done (" << done << "/"
                              << pending.size() << ")\n";
                }
            }
            write_manifest(manifest_path, job, data);
        }
        for (auto& th : pool) th.join();
        if (aborted || failed) {
            std::lock_guard<std::mutex> lock(mu);
            throw std::runtime_error(job.command + ": worker failed: " + error_msg);
        }
    }

    write_manifest(manifest_path, job, data);

    bool all_complete = true;
    for (const auto& d : data) all_complete = all_complete && d.complete;
    if (!all_complete) {
        if (!opt.quiet)
            std::cout << job.command << ": " << left_behind
                      << " cell(s) still pending; rerun with --resume to finish\n";
        return kExitOk;
    }

    const bool to_bits = job.kind != ValueKind::GradVariance && job.cfg.entropy_units == "bits";
    const double scale = to_bits ? 1.0 / std::numbers::ln2 : 1.0;

    EnsembleTable table;
    table.kind = job.kind;
    table.seed = job.cfg.seed;
    table.config_hash = job.cfg.hash();
    RawTable rawt;
    rawt.kind = job.kind;
    rawt.seed = job.cfg.seed;
    rawt.config_hash = job.cfg.hash();

    for (size_t g = 0; g < num_groups; ++g) {
        const GroupSpec& spec = job.groups[g];
        for (int t = 0; t < spec.num_targets(); ++t) {
            const std::vector<double>& values = data[g].values[t];
            EnsembleRow row;
            row.family = family_name(job.cfg.family);
            row.num_qubits = spec.num_qubits;
            row.rate = spec.rate;
            row.depth = job.cfg.depth;
            row.num_samples = samples;
            row.separation = spec.target_r(t);
            if (job.kind == ValueKind::GradVariance) {
                row.value = sample_variance(values);
                row.std_dev = std::sqrt(row.value);
                row.std_error = bootstrap_variance_stderr(
                    values, job.cfg.k_boot,
                    derive_seed(job.cfg.seed, kBootstrapSalt + static_cast<uint64_t>(g)));
            } else {
                Stats s = mean_stats(values);
                row.value = s.mean * scale;
                row.std_dev = s.sd * scale;
                row.std_error = s.se * scale;
            }
            table.rows.push_back(row);

            if (opt.write_raw) {
                RawCell cell;
                cell.num_qubits = spec.num_qubits;
                cell.rate = spec.rate;
                cell.separation = spec.target_r(t);
                cell.values = values;
                if (scale != 1.0)
                    for (double& v : cell.values) v *= scale;
                rawt.cells.push_back(std::move(cell));
            }
        }
    }

    fs::path table_path = base;
    table_path += ".csv";
    write_table_csv(table, table_path.string());
    if (!opt.quiet) std::cout << job.command << ": wrote " << table_path.string() << "\n";
    if (opt.write_raw) {
        fs::path raw_path = base;
        raw_path += "_raw.csv";
        write_raw_csv(rawt, raw_path.string());
        if (!opt.quiet) std::cout << job.command << ": wrote " << raw_path.string() << "\n";
    }
    if (job.track_layers) {
        fs::path layers_path = base;
        layers_path += "_layers.csv";
        write_layers_csv(job, data, scale, layers_path);
        if (!opt.quiet) std::cout << job.command << ": wrote " << layers_path.string() << "\n";
    }
    return kExitOk;
}

}  // namespace

int cmd_sweep(const ExperimentConfig& config, const DriverOptions& options) {
    Job job;
    job.command = "sweep";
    job.kind = ValueKind::Entropy;
    job.cfg = config.resolved(Command::Sweep, options.paper_scale);
    job.file_stem = std::string("sweep_") + family_name(job.cfg.family);
    job.track_layers = job.cfg.per_layer;
    for (int n : job.cfg.sizes)
        for (double p : job.cfg.rates) job.groups.push_back({n, p, {}});
    const ExperimentConfig cfg = job.cfg;
    job.unit = [cfg](const GroupSpec& spec, uint64_t seed) {
        SplitMix64 param_rng(derive_seed(seed, 0));
        const CircuitSpec circuit = build_random_circuit(cfg.family, spec.num_qubits, cfg.depth,
                                                         param_rng, cfg.hea_cnot_wrap);
        TrajectoryOptions topt;
        topt.per_layer_entropy = cfg.per_layer;
        TrajectoryResult res = run_trajectory(circuit, spec.rate, derive_seed(seed, 1), topt);
        UnitOut out;
        out.values.push_back(cfg.per_layer ? res.per_layer_entropy.back()
                                           : half_chain_entropy(res.final_state));
        if (cfg.per_layer) out.layers = std::move(res.per_layer_entropy);
        return out;
    };
    return run_job(job, options);
}

int cmd_mutinfo(const ExperimentConfig& config, const DriverOptions& options) {
    Job job;
    job.command = "mutinfo";
    job.kind = ValueKind::MutualInfo;
    job.cfg = config.resolved(Command::MutInfo, options.paper_scale);
    job.file_stem = std::string("mutinfo_") + family_name(job.cfg.family);
    const int n = job.cfg.sizes[0];
    for (double p : job.cfg.rates) job.groups.push_back({n, p, job.cfg.separations});
    const ExperimentConfig cfg = job.cfg;
    job.unit = [cfg](const GroupSpec& spec, uint64_t seed) {
        SplitMix64 param_rng(derive_seed(seed, 0));
        const CircuitSpec circuit = build_random_circuit(cfg.family, spec.num_qubits, cfg.depth,
                                                         param_rng, cfg.hea_cnot_wrap);
        TrajectoryResult res = run_trajectory(circuit, spec.rate, derive_seed(seed, 1));
        UnitOut out;
        out.values.reserve(spec.separations.size());
        for (int r : spec.separations)
            out.values.push_back(mutual_information(res.final_state, 0, r));
        return out;
    };
    return run_job(job, options);
}

int cmd_gradvar(const ExperimentConfig& config, const DriverOptions& options) {
    Job job;
    job.command = "gradvar";
    job.kind = ValueKind::GradVariance;
    job.cfg = config.resolved(Command::GradVar, options.paper_scale);
    job.file_stem = std::string("gradvar_") + family_name(job.cfg.family);
    for (int n : job.cfg.sizes)
        for (double p : job.cfg.rates) job.groups.push_back({n, p, {}});
    const ExperimentConfig cfg = job.cfg;
    const Observable obs = Observable::parse(cfg.observable);
    job.unit = [cfg, obs](const GroupSpec& spec, uint64_t seed) {
        UnitOut out;
        out.values.push_back(gradient_sample(cfg.family, spec.num_qubits, cfg.depth, spec.rate,
                                             seed, obs, cfg.param_index, cfg.hea_cnot_wrap));
        return out;
    };
    return run_job(job, options);
}

namespace {

void append_fit_lines(std::ostringstream& out, const CollapseFit& fit) {
    out << "p_c: " << format_double(fit.p_c) << "\n";
    out << "nu: " << format_double(fit.nu) << "\n";
    out << "chi2: " << format_double(fit.chi2) << "\n";
    out << "dof: " << fit.dof << "\n";
    if (fit.dof > 0) out << "chi2_per_dof: " << format_double(fit.chi2 / fit.dof) << "\n";
    out << "converged: " << (fit.converged ? "true" : "false") << "\n";
    out << "poly_coeffs:";
    for (double c : fit.poly_coeffs) out << ' ' << format_double(c);
    out << "\n";
    out << "candidates_evaluated: " << fit.candidates.size() << "\n";
}

EnsembleTable filter_by_size(const EnsembleTable& table, int size_cap) {
    EnsembleTable sub;
    sub.kind = table.kind;
    sub.seed = table.seed;
    sub.config_hash = table.config_hash;
    for (const auto& row : table.rows)
        if (row.num_qubits <= size_cap) sub.rows.push_back(row);
    return sub;
}

}  // namespace

int cmd_collapse(const CollapseArgs& args, const DriverOptions& options,
                 CollapseReport* report) {
    fs::create_directories(options.out_dir);

    EnsembleTable table;
    RawTable raw;
    const bool have_raw = !args.raw_path.empty();
    try {
        table = read_table_csv(args.table_path);
        if (have_raw) raw = read_raw_csv(args.raw_path);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("collapse: ") + e.what());
    }
    if (have_raw &&
        (raw.config_hash != table.config_hash || raw.seed != table.seed || raw.kind != table.kind))
        throw ConfigError("collapse: raw file does not match the table (kind, hash, or seed differ)");

    CollapseReport rep;
    rep.mode = args.mode;
    std::ostringstream text;
    std::ostringstream points;
    int exit_code = kExitOk;

    if (args.mode == "entropy") {
        if (table.kind != ValueKind::Entropy)
            throw ConfigError("collapse: entropy mode needs an entropy table (kind is " +
                              std::string(value_kind_name(table.kind)) + ")");
        CollapseFit fit;
        try {
            fit = fit_collapse(table, {}, args.entropy_options);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("collapse: ") + e.what());
        }
        if (have_raw) {
            fit.bootstrap_std_nu =
                bootstrap_nu(table, raw, fit.p_c, args.k_boot, args.seed, args.entropy_options);
            fit.k_boot = args.k_boot;
        }

        text << "mode: entropy\n";
        text << "table: " << args.table_path << "\n";
        text << "rows: " << table.rows.size() << "\n";
        append_fit_lines(text, fit);
        if (have_raw) {
            text << "bootstrap_std_nu: " << format_double(fit.bootstrap_std_nu) << "\n";
            text << "k_boot: " << fit.k_boot << "\n";
        }

        // Infinite-size estimate: refit with sizes capped at N' for every
        // N' in the upper half of the size list, then extrapolate nu
        // against 1/N'. Each capped fit needs >= 3 sizes.
        const std::vector<int> sizes = table.sizes();
        const int n_max = sizes.back();
        std::vector<ExtrapolationPoint> pts;
        for (int cap : sizes) {
            if (2 * cap < n_max) continue;
            const auto below =
                std::count_if(sizes.begin(), sizes.end(), [cap](int n) { return n <= cap; });
            if (below < 3) continue;
            EnsembleTable sub = filter_by_size(table, cap);
            CollapseFit sub_fit = fit_collapse(sub, {}, args.entropy_options);
            ExtrapolationPoint pt;
            pt.size_cap = cap;
            pt.nu = sub_fit.nu;
            if (have_raw)
                pt.std_err = bootstrap_nu(sub, raw, sub_fit.p_c, args.k_boot,
                                          derive_seed(args.seed, static_cast<uint64_t>(cap)),
                                          args.entropy_options);
            pts.push_back(pt);
        }
        if (pts.size() >= 2) {
            rep.extrapolation = extrapolate_nu(pts);
            rep.extrapolated = true;
            text << "extrapolation_points:";
            for (const auto& pt : rep.extrapolation.points)
                text << " N'=" << pt.size_cap << ":nu=" << format_double(pt.nu)
                     << (pt.std_err > 0.0 ? ":se=" + format_double(pt.std_err) : "");
            text << "\n";
            text << "extrapolation_slope: " << format_double(rep.extrapolation.slope) << "\n";
            text << "extrapolated_nu: " << format_double(rep.extrapolation.intercept) << "\n";
            text << "extrapolation_weighted: " << (rep.extrapolation.weighted ? "true" : "false")
                 << "\n";
            if (pts.size() < 3)
                text << "extrapolation_note: only " << pts.size()
                     << " size caps available; treat the extrapolated value as indicative\n";
        } else {
            text << "extrapolation_note: not enough sizes for an infinite-size estimate\n";
        }

        points << "N,p,x,y,sigma\n";
        for (const auto& pt : rescale(table, fit.p_c, fit.nu, args.entropy_options))
            points << pt.num_qubits << ',' << format_double(pt.rate) << ','
                   << format_double(pt.x) << ',' << format_double(pt.y) << ','
                   << format_double(pt.sigma) << "\n";

        rep.entropy_fit = fit;
        if (!fit.converged) exit_code = kExitNoConverge;
    } else if (args.mode == "gradvar") {
        if (table.kind != ValueKind::GradVariance)
            throw ConfigError("collapse: gradvar mode needs a grad_variance table (kind is " +
                              std::string(value_kind_name(table.kind)) + ")");
        if (args.p_c < 0.0)
            throw ConfigError("collapse: gradvar mode needs --pc (from the entropy fit)");
        GradVarCollapseFit fit;
        try {
            fit = fit_gradvar_collapse(table, args.p_c, args.gradvar_options);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("collapse: ") + e.what());
        }

        text << "mode: gradvar\n";
        text << "table: " << args.table_path << "\n";
        text << "rows: " << table.rows.size() << "\n";
        text << "p_c_fixed: " << format_double(fit.p_c) << "\n";
        text << "nu: " << format_double(fit.nu) << "\n";
        text << "chi2: " << format_double(fit.chi2) << "\n";
        text << "dof: " << fit.dof << "\n";
        if (fit.dof > 0) text << "chi2_per_dof: " << format_double(fit.chi2 / fit.dof) << "\n";
        text << "converged: " << (fit.converged ? "true" : "false") << "\n";
        text << "excluded_rows: " << fit.excluded_rows << "\n";
        text << "plateau:";
        for (size_t i = 0; i < fit.plateau.size(); ++i) {
            if (fit.plateau_sizes.size() == fit.plateau.size())
                text << " N=" << fit.plateau_sizes[i] << ":C=" << format_double(fit.plateau[i]);
            else
                text << " C=" << format_double(fit.plateau[i]);
        }
        text << "\n";

        points << "N,p,x,y,sigma\n";
        const double inv_nu = 1.0 / fit.nu;
        for (const auto& row : table.rows) {
            if (row.value <= 0.0) continue;
            const double x =
                std::abs(row.rate - fit.p_c) * std::pow(double(row.num_qubits), inv_nu);
            points << row.num_qubits << ',' << format_double(row.rate) << ','
                   << format_double(x) << ',' << format_double(std::log(row.value)) << ','
                   << format_double(row.std_error / row.value) << "\n";
        }

        rep.gradvar_fit = fit;
        if (!fit.converged) exit_code = kExitNoConverge;
    } else {
        throw ConfigError("collapse: unknown mode '" + args.mode + "' (entropy | gradvar)");
    }

    rep.text = text.str();
    write_text_file(fs::path(options.out_dir) / "collapse_report.txt", rep.text);
    write_text_file(fs::path(options.out_dir) / "collapse_points.csv", points.str());
    if (!options.quiet) std::cout << rep.text;
    if (report) *report = rep;
    return exit_code;
}

}  // namespace mvqc
