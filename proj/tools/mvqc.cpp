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

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "mvqc/driver.hpp"
#include "mvqc/gradcheck.hpp"

int main(int argc, char** argv) try {
    using namespace mvqc;

    CLI::App app{"mvqc: monitored variational circuits, entanglement sweeps, scaling fits"};
    app.require_subcommand(1);

    std::string config_path;
    uint64_t seed_override = 0;
    DriverOptions opt;
    CollapseArgs cargs;
    GradcheckOptions gopt;
    std::string sigma_choice = "stderr";
    double nu_init = 1.33;

    auto add_run_flags = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config file (key = value lines)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--seed", seed_override, "override the config seed");
        sub->add_option("--threads", opt.threads, "worker threads (results identical for any count)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--out", opt.out_dir, "output directory (default .)");
        sub->add_flag("--resume", opt.resume, "reuse completed cells from an existing manifest");
        sub->add_flag("--paper-scale", opt.paper_scale,
                      "lift the desk-scale caps (N up to 18, default R = 3000)");
        sub->add_flag("--raw", opt.write_raw, "also write per-realization raw values");
        sub->add_option("--max-cells", opt.max_cells,
                        "stop after completing this many cells (staged runs)")
            ->check(CLI::NonNegativeNumber);
        sub->add_flag("--quiet", opt.quiet, "suppress progress output");
    };

    CLI::App* sweep =
        app.add_subcommand("sweep", "half-chain entanglement entropy over the (N, p) grid");
    add_run_flags(sweep);
    CLI::App* mutinfo =
        app.add_subcommand("mutinfo", "two-site mutual information vs p at fixed N");
    add_run_flags(mutinfo);
    CLI::App* gradvar =
        app.add_subcommand("gradvar", "sampled variance of one branch gradient over (N, p)");
    add_run_flags(gradvar);

    CLI::App* collapse =
        app.add_subcommand("collapse", "finite-size scaling fit of a previously written table");
    collapse->add_option("--table", cargs.table_path, "input table CSV")
        ->required()
        ->check(CLI::ExistingFile);
    collapse->add_option("--raw-file", cargs.raw_path,
                         "matching raw CSV; enables the nu bootstrap and weighted extrapolation")
        ->check(CLI::ExistingFile);
    collapse->add_option("--mode", cargs.mode, "entropy | gradvar (default entropy)")
        ->check(CLI::IsMember({"entropy", "gradvar"}));
    collapse->add_option("--pc", cargs.p_c, "fixed critical rate (required in gradvar mode)");
    collapse->add_option("--kboot", cargs.k_boot, "bootstrap refits (default 100)")
        ->check(CLI::PositiveNumber);
    collapse->add_option("--seed", cargs.seed, "bootstrap resampling seed");
    collapse->add_option("--chi2-power", cargs.entropy_options.chi2_power,
                         "sigma exponent in the chi^2 weights (1 or 2, default 2)")
        ->check(CLI::IsMember({1, 2}));
    collapse->add_option("--sigma", sigma_choice,
                         "error bar used in the fit: stderr (default) or std")
        ->check(CLI::IsMember({"stderr", "std"}));
    collapse->add_option("--nu-init", nu_init, "initial guess for nu (default 1.33)");
    collapse->add_flag("--global-plateau", cargs.gradvar_options.global_plateau,
                       "fit one shared plateau constant instead of one per N");
    collapse->add_option("--out", opt.out_dir, "output directory (default .)");
    collapse->add_flag("--quiet", opt.quiet, "do not echo the report");

    CLI::App* gradcheck = app.add_subcommand(
        "gradcheck", "run the gradient oracle suite against dense-matrix references");
    gradcheck->add_option("--instances", gopt.instances, "random instances (default 100)")
        ->check(CLI::PositiveNumber);
    gradcheck->add_option("--seed", gopt.seed, "instance seed");
    gradcheck->add_flag("--corrupt-sign", gopt.corrupt_sign,
                        "negative control: flip the correction sign and expect failures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (app.got_subcommand(gradcheck)) return cmd_gradcheck(gopt);

    if (app.got_subcommand(collapse)) {
        cargs.entropy_options.sigma_from_std = (sigma_choice == "std");
        if (collapse->count("--nu-init") > 0) {
            cargs.entropy_options.nu_init = nu_init;
            cargs.gradvar_options.nu_init = nu_init;
        }
        return cmd_collapse(cargs, opt);
    }

    ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
    CLI::App* run = app.got_subcommand(sweep) ? sweep
                    : app.got_subcommand(mutinfo) ? mutinfo
                                                  : gradvar;
    if (run->count("--seed") > 0) cfg.seed = seed_override;
    if (run == sweep) return cmd_sweep(cfg, opt);
    if (run == mutinfo) return cmd_mutinfo(cfg, opt);
    return cmd_gradvar(cfg, opt);
} catch (const mvqc::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mvqc::kExitConfig;
} catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mvqc::kExitConfig;
} catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
}
