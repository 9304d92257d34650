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

#pragma once

// Named presets, overrides, and the on-disk output of a run: statistics and path CSVs
// plus a JSON manifest, all inside one directory.

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "montecarlo.hpp"

namespace adaptq {

inline constexpr const char *kVersion = "0.1.0";

inline const std::vector<std::string> &preset_names() {
    static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5", "fig6", "remark3-const-k"};
    return names;
}

namespace detail {

inline ExperimentConfig make_run(std::string name, SchemeConfig scheme, double Delta, double Delta_nominal,
                                 double horizon, Tier tier, std::size_t show = 0) {
    ExperimentConfig c;
    c.name = std::move(name);
    c.scheme = scheme;
    c.Delta = Delta;
    c.Delta_nominal = Delta_nominal;
    c.horizon = horizon;
    c.tier = tier;
    c.n_show = show;
    return c;
}

// value -> file-name fragment: 0.001 -> "0.001", 1e-05 -> "1e-05"
inline std::string tag(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace detail

/// Robust runs use k = 4, alpha = 1/2 and Jacobs runs kappa = 1 unless the figure
/// varies them. Figures 4 to 6 have no stated horizon; they use T = 10.
inline std::vector<ExperimentConfig> preset(const std::string &name) {
    using detail::make_run;
    const Robust robust{4.0, 0.5};
    const Jacobs jacobs{1.0};
    std::vector<ExperimentConfig> runs;
    if (name == "fig2") {
        runs.push_back(make_run("robust", robust, 0.0, 0.0, 5.0, Tier::scalar_closed_loop));
        runs.push_back(make_run("jacobs", jacobs, 0.0, 0.0, 5.0, Tier::scalar_closed_loop));
    } else if (name == "fig3") {
        for (double D : {1.0, 1e-1, 1e-2, 1e-3, 0.0})
            runs.push_back(make_run("robust_Delta_" + detail::tag(D), robust, D, D, 10.0, Tier::scalar_closed_loop));
    } else if (name == "fig4") {
        runs.push_back(make_run("robust", robust, 1e-2, 0.0, 10.0, Tier::scalar_coupled, 1));
        runs.push_back(make_run("jacobs", jacobs, 1e-2, 0.0, 10.0, Tier::scalar_coupled, 1));
    } else if (name == "fig5") {
        for (double Dn : {1e-3, 1e-2, 1e-1}) {
            runs.push_back(make_run("robust_Dnom_" + detail::tag(Dn), robust, 1e-2, Dn, 10.0, Tier::scalar_coupled, 1));
            runs.push_back(make_run("jacobs_Dnom_" + detail::tag(Dn), jacobs, 1e-2, Dn, 10.0, Tier::scalar_coupled, 1));
        }
    } else if (name == "fig6") {
        // the figure sets one strength per row for both schemes: k = kappa for the robust one
        for (double kappa : {5.0, 50.0}) {
            runs.push_back(make_run("robust_k_" + detail::tag(kappa), Robust{kappa, 0.5}, 1e-2, 1e-3, 10.0,
                                    Tier::scalar_coupled, 1));
            runs.push_back(make_run("jacobs_kappa_" + detail::tag(kappa), Jacobs{kappa}, 1e-2, 1e-3, 10.0,
                                    Tier::scalar_coupled, 1));
        }
    } else if (name == "remark3-const-k") {
        runs.push_back(make_run("jacobs_constant", JacobsConstant{4.0}, 0.0, 0.0, 5.0, Tier::scalar_closed_loop));
    } else {
        throw ConfigError("preset", "unknown preset '" + name + "'");
    }
    return runs;
}

/// Command-line overrides applied to every run of a preset or config file.
struct Overrides {
    std::optional<std::uint64_t> paths;
    std::optional<double> dt;
    std::optional<double> horizon;
    std::optional<std::uint64_t> seed;
    std::optional<Tier> tier;
    std::optional<std::size_t> stride;
    std::optional<std::size_t> show;
    std::optional<Integrator> integrator;
    std::optional<std::size_t> substeps;

    void apply(std::vector<ExperimentConfig> &runs) const {
        for (auto &c : runs) {
            if (paths) c.n_paths = *paths;
            if (dt) c.dt = *dt;
            if (horizon) c.horizon = *horizon;
            if (seed) c.seed = *seed;
            if (tier) c.tier = *tier;
            if (stride) c.stride = *stride;
            if (show) c.n_show = *show;
            if (integrator) c.integrator = *integrator;
            if (substeps) c.substeps = *substeps;
        }
    }
};

inline std::string stats_csv(const EnsembleStats &st) {
    std::string out = st.has_nominal() ? "t,mean_delta,std_delta,n,mean_delta_nominal,std_delta_nominal\n"
                                       : "t,mean_delta,std_delta,n\n";
    for (std::size_t i = 0; i < st.t.size(); ++i) {
        out += format_double(st.t[i]) + ',' + format_double(st.delta[i].mean) + ',' +
               format_double(st.delta[i].stddev()) + ',' + std::to_string(st.delta[i].n);
        if (st.has_nominal())
            out += ',' + format_double(st.nominal[i].mean) + ',' + format_double(st.nominal[i].stddev());
        out += '\n';
    }
    return out;
}

/// Raw (unwrapped) angles, one row per path and record time.
inline std::string paths_csv(const std::vector<PathRecord<PathSample>> &paths) {
    std::string out = "t,path_id,delta_true,delta_nominal\n";
    for (std::size_t p = 0; p < paths.size(); ++p)
        for (std::size_t i = 0; i < paths[p].t.size(); ++i)
            out += format_double(paths[p].t[i]) + ',' + std::to_string(p) + ',' +
                   format_double(paths[p].state[i].delta) + ',' + format_double(paths[p].state[i].delta_nominal) +
                   '\n';
    return out;
}

inline void write_file(const std::filesystem::path &p, const std::string &text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write " + p.string());
    f << text;
    if (!f) throw Error("cannot write " + p.string());
}

inline std::string read_file(const std::filesystem::path &p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw ConfigError("config", "cannot read " + p.string());
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Loads runs from a config file, or from the config echo of a manifest (.json).
inline std::vector<ExperimentConfig> load_config(const std::filesystem::path &p) {
    const std::string text = read_file(p);
    if (p.extension() == ".json") {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception &e) {
            throw ConfigError("config", std::string("malformed manifest: ") + e.what());
        }
        if (!j.contains("config") || !j["config"].is_string()) throw ConfigError("config", "manifest has no config echo");
        return parse_config(j["config"].get<std::string>());
    }
    return parse_config(text);
}

struct RunSummary {
    std::string name;
    EnsembleStats stats;
    std::vector<std::string> files;
};

/// Runs every configuration and writes `<name>.stats.csv`, `<name>.paths.csv` (when
/// show > 0) and `manifest.json` under `dir`.
inline std::vector<RunSummary> run_all(const std::vector<ExperimentConfig> &runs, const std::filesystem::path &dir,
                                       unsigned workers, const std::string &label) {
    for (const auto &c : runs) c.validate();
    const std::string started = utc_timestamp();
    std::filesystem::create_directories(dir);
    std::vector<RunSummary> out;
    for (const auto &c : runs) {
        RunSummary s{c.name, run_ensemble(c, workers), {}};
        write_file(dir / (c.name + ".stats.csv"), stats_csv(s.stats));
        s.files.push_back(c.name + ".stats.csv");
        const std::size_t show = std::min<std::uint64_t>(c.n_show, c.n_paths);
        if (show > 0) {
            write_file(dir / (c.name + ".paths.csv"), paths_csv(run_sample_paths(c, show, workers)));
            s.files.push_back(c.name + ".paths.csv");
        }
        out.push_back(std::move(s));
    }

    nlohmann::ordered_json m;
    m["artifact"] = "adaptq";
    m["version"] = kVersion;
    m["label"] = label;
    m["started_utc"] = started;
    m["finished_utc"] = utc_timestamp();
    m["config"] = serialize_config(runs);
    auto &jr = m["runs"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto &c = runs[i];
        nlohmann::ordered_json r;
        r["name"] = c.name;
        r["scheme"] = scheme_name(c.scheme);
        r["tier"] = tier_name(c.tier);
        r["seed"] = c.seed;
        r["paths"] = c.n_paths;
        r["files"] = out[i].files;
        jr.push_back(r);
    }
    std::vector<std::string> files{"manifest.json"};
    for (const auto &s : out) files.insert(files.end(), s.files.begin(), s.files.end());
    m["files"] = files;
    write_file(dir / "manifest.json", m.dump(2) + '\n');
    return out;
}

/// (mean fidelity at t1 - mean fidelity at 0) / t1 with t1 the first record at or after
/// min(0.1, T).
inline double fidelity_rate(const EnsembleStats &st, double horizon) {
    const double target = std::min(0.1, horizon);
    for (std::size_t i = 1; i < st.t.size(); ++i)
        if (st.t[i] >= target - 1e-12) return (st.fidelity[i].mean - st.fidelity[0].mean) / st.t[i];
    return 0.0;
}

/// One output directory `<param>_<value>` per value and `index.csv` in `dir`.
inline void sweep(const std::vector<ExperimentConfig> &base, const std::string &param, const std::vector<double> &values,
                  const std::filesystem::path &dir, unsigned workers) {
    if (param == "scheme" || param == "tier" || param == "integrator")
        throw ConfigError(param, "sweeps take a numeric field");
    bool any = false;
    for (const auto &c : base) any = any || accepts_field(c, param);
    if (!any) throw ConfigError(param, "no run in the base configuration has this field");
    if (values.empty()) throw ConfigError("values", "empty value list");

    const bool count = param == "paths" || param == "stride" || param == "seed" || param == "substeps" || param == "show";
    std::string index = "param,value,run,dir,final_t,final_mean_delta,final_std_delta,fidelity_rate\n";
    for (double v : values) {
        if (count && !(v >= 0.0 && v == std::floor(v) && v < 1.8e19)) throw ConfigError(param, "needs integer values");
        const std::string text = count ? std::to_string(static_cast<std::uint64_t>(v)) : format_double(v);
        auto runs = base;
        for (auto &c : runs)
            if (accepts_field(c, param)) set_field(c, param, text);
        const std::string sub = param + "_" + detail::tag(v);
        const auto results = run_all(runs, dir / sub, workers, "sweep " + param);
        for (std::size_t i = 0; i < runs.size(); ++i) {
            const auto &st = results[i].stats;
            index += param + ',' + format_double(v) + ',' + runs[i].name + ',' + sub + ',' + format_double(st.t.back()) +
                     ',' + format_double(st.delta.back().mean) + ',' + format_double(st.delta.back().stddev()) + ',' +
                     format_double(fidelity_rate(st, runs[i].horizon)) + '\n';
        }
    }
    std::filesystem::create_directories(dir);
    write_file(dir / "index.csv", index);
}

}  // namespace adaptq
