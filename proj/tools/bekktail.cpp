/*
Copyright 2026 bekktail developers
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/


// Command-line front end. Everything numeric happens behind the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bekktail/bekktail.h"

namespace {

struct Flags {
    std::uint64_t seed = 1;
    bool simulate = false;
    bool check_assumptions = false;
    bool require_stationary = false;
    long samples = 0;
    int replicas = 0;
    std::string out;
    std::string emit_csv;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--seed", f.seed, "random seed");
    cmd->add_flag("--simulate", f.simulate, "simulate and estimate tails empirically");
    cmd->add_flag("--check-assumptions", f.check_assumptions, "run the assumption checkers");
    cmd->add_flag("--require-stationary", f.require_stationary, "exit 4 unless the model is certified stationary");
    cmd->add_option("--samples", f.samples, "ensemble size for --simulate")->check(CLI::PositiveNumber);
    cmd->add_option("--replicas", f.replicas, "independent trajectories for --simulate")->check(CLI::PositiveNumber);
    cmd->add_option("--out", f.out, "write the JSON report here instead of stdout");
    cmd->add_option("--emit-csv", f.emit_csv, "directory for hill_curve.csv and survival.csv");
    cmd->add_option("--threads", f.threads, "worker threads (0 = all)");
}

bekk_analyze_options to_options(const Flags& f) {
    bekk_analyze_options o;
    bekk_analyze_options_init(&o);
    o.seed = f.seed;
    o.simulate = f.simulate;
    o.check_assumptions = f.check_assumptions;
    o.require_stationary = f.require_stationary;
    if (f.samples > 0) o.samples = f.samples;
    if (f.replicas > 0) o.replicas = f.replicas;
    o.emit_csv_dir = f.emit_csv.empty() ? nullptr : f.emit_csv.c_str();
    return o;
}

int report_error(bekk_status s) {
    std::cerr << "error: " << bekk_status_name(s) << ": " << bekk_last_error() << '\n';
    return 2;
}

bool write_output(const std::string& path, const char* text) {
    if (path.empty()) {
        std::fputs(text, stdout);
        return true;
    }
    std::ofstream f(path);
    if (!f) {
        std::cerr << "error: cannot write " << path << '\n';
        return false;
    }
    f << text;
    return static_cast<bool>(f);
}

int run_analyze(const std::string& config, const Flags& f) {
    bekk_model* model = nullptr;
    bekk_status s = bekk_model_from_file(config.c_str(), &model);
    if (s != BEKK_OK) return report_error(s);
    if (!f.emit_csv.empty() && !f.simulate) std::cerr << "warning: --emit-csv has no effect without --simulate\n";
    const bekk_analyze_options opts = to_options(f);
    char* json = nullptr;
    int exit_code = 0;
    s = bekk_analyze(model, &opts, &json, &exit_code);
    bekk_model_free(model);
    if (s != BEKK_OK) return report_error(s);
    const bool ok = write_output(f.out, json);
    bekk_string_free(json);
    if (!ok) return 1;
    return exit_code;
}

int run_reproduce(const std::string& id, const Flags& f) {
    const bekk_analyze_options opts = to_options(f);
    char* json = nullptr;
    int passed = 0;
    const bekk_status s = bekk_reproduce(id.c_str(), &opts, &json, &passed);
    if (s != BEKK_OK) {
        if (s == BEKK_E_UNKNOWN_EXAMPLE) std::cerr << "known examples: " << bekk_example_ids() << '\n';
        return report_error(s);
    }
    const bool ok = write_output(f.out, json);
    bekk_string_free(json);
    std::cerr << "example " << id << ": " << (passed ? "PASS" : "FAIL") << '\n';
    if (!ok) return 1;
    return passed ? 0 : 1;
}

int run_simulate(const std::string& config, const Flags& f, long burn_in) {
    bekk_model* model = nullptr;
    bekk_status s = bekk_model_from_file(config.c_str(), &model);
    if (s != BEKK_OK) return report_error(s);
    bekk_sim_config cfg;
    bekk_sim_config_init(&cfg);
    cfg.seed = f.seed;
    if (f.samples > 0) cfg.n_samples = f.samples;
    if (f.replicas > 0) cfg.replicas = f.replicas;
    if (burn_in > 0) cfg.burn_in = burn_in;
    const std::string path = f.out.empty() ? "/dev/stdout" : f.out;
    s = bekk_simulate_csv(model, &cfg, path.c_str());
    bekk_model_free(model);
    return s == BEKK_OK ? 0 : report_error(s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tail analysis of BEKK-ARCH models"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(bekk_version()));

    Flags analyze_flags, reproduce_flags, simulate_flags;
    std::string config, example, sim_config;
    long burn_in = 0;

    CLI::App* analyze = app.add_subcommand("analyze", "analyze a model config (JSON)");
    analyze->add_option("config", config, "model config path")->required();
    add_common(analyze, analyze_flags);

    CLI::App* reproduce = app.add_subcommand("reproduce", "run a shipped example and check its conclusion");
    reproduce->add_option("example_id", example, "example id, e.g. 5.2")->required();
    add_common(reproduce, reproduce_flags);

    CLI::App* simulate = app.add_subcommand("simulate", "dump an ensemble as CSV (t,v1,...)");
    simulate->add_option("config", sim_config, "model config path")->required();
    simulate->add_option("--seed", simulate_flags.seed, "random seed");
    simulate->add_option("--samples", simulate_flags.samples, "retained states")->check(CLI::PositiveNumber);
    simulate->add_option("--replicas", simulate_flags.replicas, "trajectories")->check(CLI::PositiveNumber);
    simulate->add_option("--burn-in", burn_in, "burn-in steps")->check(CLI::PositiveNumber);
    simulate->add_option("--out", simulate_flags.out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (*analyze) {
        bekk_set_threads(analyze_flags.threads);
        return run_analyze(config, analyze_flags);
    }
    if (*reproduce) {
        bekk_set_threads(reproduce_flags.threads);
        return run_reproduce(example, reproduce_flags);
    }
    return run_simulate(sim_config, simulate_flags, burn_in);
}
