// Copyright 2026 The adaptq Authors
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

// adaptq: run presets or config files, sweep one field, or run the verification table.
//
// Exit codes: 0 success, 1 failed verification, 2 configuration error, 3 integration error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adaptq/experiments.hpp"
#include "adaptq/verify.hpp"

namespace {

using namespace adaptq;

struct Source {
    std::string preset;
    std::string config;
    std::string out;
    unsigned workers = 1;
    std::optional<std::string> tier;
    std::optional<std::string> integrator;
    Overrides over;
};

void add_source_options(CLI::App *cmd, Source &s) {
    cmd->add_option("--preset", s.preset, "named preset: fig2 fig3 fig4 fig5 fig6 remark3-const-k");
    cmd->add_option("--config", s.config, "config file, or a manifest.json from an earlier run");
    cmd->add_option("--paths", s.over.paths, "Monte Carlo paths per run");
    cmd->add_option("--dt", s.over.dt, "time step");
    cmd->add_option("--horizon", s.over.horizon, "final time");
    cmd->add_option("--seed", s.over.seed, "master seed");
    cmd->add_option("--workers", s.workers, "worker threads (results do not depend on it)");
    cmd->add_option("--out", s.out, "output directory");
    cmd->add_option("--tier", s.tier, "scalar_closed_loop | scalar_coupled | matrix_coupled | linearized");
    cmd->add_option("--stride", s.over.stride, "steps between recorded samples");
    cmd->add_option("--show", s.over.show, "trajectories written to <run>.paths.csv");
    cmd->add_option("--integrator", s.integrator, "euler_maruyama | milstein");
    cmd->add_option("--substeps", s.over.substeps, "Brownian-bridge substeps per step");
}

std::vector<ExperimentConfig> load_runs(Source &s) {
    if (s.preset.empty() == s.config.empty()) throw ConfigError("preset", "give exactly one of --preset and --config");
    if (s.tier) s.over.tier = parse_tier(*s.tier);
    if (s.integrator) s.over.integrator = parse_integrator(*s.integrator);
    auto runs = s.preset.empty() ? load_config(s.config) : preset(s.preset);
    s.over.apply(runs);
    for (const auto &r : runs) r.validate();
    return runs;
}

std::filesystem::path output_dir(const Source &s, const std::string &prefix) {
    if (!s.out.empty()) return s.out;
    const std::string stem = s.preset.empty() ? std::filesystem::path(s.config).stem().string() : s.preset;
    return std::filesystem::path("runs") / (prefix + stem);
}

std::string label(const Source &s) { return s.preset.empty() ? "config " + s.config : "preset " + s.preset; }

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"adaptive qubit measurement simulator"};
    app.require_subcommand(1);

    Source run_src;
    auto *run = app.add_subcommand("run", "run a preset or config file");
    add_source_options(run, run_src);

    Source sweep_src;
    std::string param;
    std::vector<double> values;
    auto *sw = app.add_subcommand("sweep", "repeat a run over values of one numeric field");
    add_source_options(sw, sweep_src);
    sw->add_option("--param", param, "field to vary, e.g. Delta_nominal, alpha, dt")->required();
    sw->add_option("--values", values, "comma-separated values")->required()->delimiter(',');

    VerifyOptions vopt;
    std::optional<double> verify_dt;
    auto *ver = app.add_subcommand("verify", "run the built-in verification checks");
    ver->add_option("--dt", verify_dt, "force every check's time step");
    ver->add_option("--seed", vopt.seed, "seed for the checks");
    ver->add_flag("--inject-innovation-flip", vopt.flip_innovation, "fault injection for testing")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            const auto runs = load_runs(run_src);
            const auto dir = output_dir(run_src, "");
            const auto res = run_all(runs, dir, run_src.workers, label(run_src));
            for (const auto &r : res) std::cout << (dir / (r.name + ".stats.csv")).string() << '\n';
            return 0;
        }
        if (*sw) {
            const auto runs = load_runs(sweep_src);
            const auto dir = output_dir(sweep_src, "sweep_" + param + "_");
            sweep(runs, param, values, dir, sweep_src.workers);
            std::cout << (dir / "index.csv").string() << '\n';
            return 0;
        }
        vopt.dt = verify_dt;
        if (vopt.dt && !(*vopt.dt > 0.0)) throw ConfigError("dt", "must be > 0");
        bool ok = true;
        std::printf("%-28s %14s %12s  %s\n", "check", "measured", "threshold", "result");
        for (const auto &c : run_verification(vopt)) {
            std::printf("%-28s %14.6g %12.3g  %s  %s\n", c.name.c_str(), c.measured, c.threshold,
                        c.pass ? "PASS" : "FAIL", c.note.c_str());
            ok = ok && c.pass;
        }
        return ok ? 0 : 1;
    } catch (const ConfigError &e) {
        std::cerr << "config error in field '" << e.field << "': " << e.what() << '\n';
        return 2;
    } catch (const IntegrationError &e) {
        std::cerr << "integration error at path " << e.path_id << ", step " << e.step << ": " << e.what() << '\n';
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
