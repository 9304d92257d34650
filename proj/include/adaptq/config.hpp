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

// Plain-text run configuration.
//
//   # comment
//   [run robust]
//   scheme = robust        # robust | jacobs | jacobs_constant
//   k = 4                  # robust, jacobs_constant
//   alpha = 0.5            # robust
//   kappa = 1              # jacobs
//   Delta = 0
//   Delta_nominal = 0
//   delta0 = 3.1415926535897931
//   dt = 0.0001
//   horizon = 5
//   paths = 10000
//   stride = 100
//   seed = 42
//   tier = scalar_closed_loop   # scalar_closed_loop | scalar_coupled | matrix_coupled | linearized
//   integrator = euler_maruyama # euler_maruyama | milstein
//   substeps = 1
//   show = 0               # trajectories written to <run>.paths.csv
//
// Every section is one run; omitted keys keep their defaults. Serialization writes every
// key with 17 significant digits, so parse(serialize(x)) == x.

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "montecarlo.hpp"
#include "policies.hpp"

namespace adaptq {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string tier_name(Tier t) {
    switch (t) {
        case Tier::scalar_closed_loop: return "scalar_closed_loop";
        case Tier::scalar_coupled: return "scalar_coupled";
        case Tier::matrix_coupled: return "matrix_coupled";
        case Tier::linearized: return "linearized";
    }
    return "?";
}

inline Tier parse_tier(const std::string &s) {
    for (Tier t : {Tier::scalar_closed_loop, Tier::scalar_coupled, Tier::matrix_coupled, Tier::linearized})
        if (tier_name(t) == s) return t;
    throw ConfigError("tier", "unknown tier '" + s + "'");
}

inline std::string integrator_name(Integrator i) {
    return i == Integrator::milstein ? "milstein" : "euler_maruyama";
}

inline Integrator parse_integrator(const std::string &s) {
    if (s == "euler_maruyama" || s == "em") return Integrator::euler_maruyama;
    if (s == "milstein") return Integrator::milstein;
    throw ConfigError("integrator", "unknown integrator '" + s + "'");
}

inline double parse_double(const std::string &field, const std::string &text) {
    const char *begin = text.c_str();
    char *end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE) throw ConfigError(field, "not a number: '" + text + "'");
    return v;
}

inline std::uint64_t parse_count(const std::string &field, const std::string &text) {
    const char *begin = text.c_str();
    char *end = nullptr;
    errno = 0;
    if (text.empty() || text[0] == '-') throw ConfigError(field, "not a non-negative integer: '" + text + "'");
    const unsigned long long v = std::strtoull(begin, &end, 10);
    if (end == begin || *end != '\0' || errno == ERANGE)
        throw ConfigError(field, "not a non-negative integer: '" + text + "'");
    return v;
}

/// Keys a scheme accepts besides the common ones.
inline std::vector<std::string> scheme_keys(const std::string &scheme) {
    if (scheme == "jacobs") return {"kappa"};
    if (scheme == "robust") return {"k", "alpha"};
    if (scheme == "jacobs_constant") return {"k"};
    throw ConfigError("scheme", "unknown scheme '" + scheme + "'");
}

inline const std::vector<std::string> &common_keys() {
    static const std::vector<std::string> keys{"Delta",  "Delta_nominal", "delta0", "dt",   "horizon",
                                               "paths",  "stride",        "seed",   "tier", "integrator",
                                               "substeps", "show"};
    return keys;
}

/// Sets one key on a run. Scheme parameters must match the run's scheme.
inline void set_field(ExperimentConfig &cfg, const std::string &key, const std::string &value) {
    if (key == "scheme") {
        if (value == "robust") cfg.scheme = Robust{};
        else if (value == "jacobs") cfg.scheme = Jacobs{};
        else if (value == "jacobs_constant") cfg.scheme = JacobsConstant{};
        else throw ConfigError("scheme", "unknown scheme '" + value + "'");
    } else if (key == "kappa") {
        auto *j = std::get_if<Jacobs>(&cfg.scheme);
        if (!j) throw ConfigError("kappa", "only the jacobs scheme takes kappa");
        j->kappa = parse_double(key, value);
    } else if (key == "k") {
        if (auto *r = std::get_if<Robust>(&cfg.scheme)) r->k = parse_double(key, value);
        else if (auto *c = std::get_if<JacobsConstant>(&cfg.scheme)) c->k = parse_double(key, value);
        else throw ConfigError("k", "the jacobs scheme takes kappa, not k");
    } else if (key == "alpha") {
        auto *r = std::get_if<Robust>(&cfg.scheme);
        if (!r) throw ConfigError("alpha", "only the robust scheme takes alpha");
        r->alpha = parse_double(key, value);
    } else if (key == "Delta") cfg.Delta = parse_double(key, value);
    else if (key == "Delta_nominal") cfg.Delta_nominal = parse_double(key, value);
    else if (key == "delta0") cfg.delta0 = parse_double(key, value);
    else if (key == "dt") cfg.dt = parse_double(key, value);
    else if (key == "horizon") cfg.horizon = parse_double(key, value);
    else if (key == "paths") cfg.n_paths = parse_count(key, value);
    else if (key == "stride") cfg.stride = parse_count(key, value);
    else if (key == "seed") cfg.seed = parse_count(key, value);
    else if (key == "tier") cfg.tier = parse_tier(value);
    else if (key == "integrator") cfg.integrator = parse_integrator(value);
    else if (key == "substeps") cfg.substeps = parse_count(key, value);
    else if (key == "show") cfg.n_show = parse_count(key, value);
    else throw ConfigError(key, "unknown key");
}

/// Whether `key` can be set on this run without changing its scheme.
inline bool accepts_field(const ExperimentConfig &cfg, const std::string &key) {
    for (const auto &k : common_keys())
        if (k == key) return true;
    for (const auto &k : scheme_keys(scheme_name(cfg.scheme)))
        if (k == key) return true;
    return false;
}

inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<ExperimentConfig> parse_config(const std::string &text) {
    std::vector<ExperimentConfig> runs;
    std::vector<std::vector<std::pair<std::string, std::string>>> entries;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("section", "line " + std::to_string(lineno) + ": missing ']'");
            const std::string inner = trim(line.substr(1, line.size() - 2));
            if (inner.rfind("run", 0) != 0) throw ConfigError("section", "line " + std::to_string(lineno) + ": expected [run NAME]");
            ExperimentConfig cfg;
            cfg.name = trim(inner.substr(3));
            if (cfg.name.empty()) throw ConfigError("section", "line " + std::to_string(lineno) + ": run without a name");
            for (const auto &r : runs)
                if (r.name == cfg.name) throw ConfigError("section", "duplicate run name '" + cfg.name + "'");
            runs.push_back(cfg);
            entries.emplace_back();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (runs.empty()) throw ConfigError(key, "outside a [run NAME] section");
        entries.back().emplace_back(key, trim(line.substr(eq + 1)));
    }
    if (runs.empty()) throw ConfigError("section", "no [run NAME] section");
    for (std::size_t i = 0; i < runs.size(); ++i) {
        // the scheme decides which parameter keys are legal, so it goes first
        for (const auto &[k, v] : entries[i])
            if (k == "scheme") set_field(runs[i], k, v);
        for (const auto &[k, v] : entries[i])
            if (k != "scheme") set_field(runs[i], k, v);
        runs[i].validate();
    }
    return runs;
}

inline std::string serialize_config(const std::vector<ExperimentConfig> &runs) {
    std::ostringstream out;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto &c = runs[i];
        if (i) out << '\n';
        out << "[run " << c.name << "]\n";
        out << "scheme = " << scheme_name(c.scheme) << '\n';
        std::visit(
            [&](const auto &s) {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, Jacobs>) out << "kappa = " << format_double(s.kappa) << '\n';
                if constexpr (std::is_same_v<S, Robust>)
                    out << "k = " << format_double(s.k) << "\nalpha = " << format_double(s.alpha) << '\n';
                if constexpr (std::is_same_v<S, JacobsConstant>) out << "k = " << format_double(s.k) << '\n';
            },
            c.scheme);
        out << "Delta = " << format_double(c.Delta) << '\n'
            << "Delta_nominal = " << format_double(c.Delta_nominal) << '\n'
            << "delta0 = " << format_double(c.delta0) << '\n'
            << "dt = " << format_double(c.dt) << '\n'
            << "horizon = " << format_double(c.horizon) << '\n'
            << "paths = " << c.n_paths << '\n'
            << "stride = " << c.stride << '\n'
            << "seed = " << c.seed << '\n'
            << "tier = " << tier_name(c.tier) << '\n'
            << "integrator = " << integrator_name(c.integrator) << '\n'
            << "substeps = " << c.substeps << '\n'
            << "show = " << c.n_show << '\n';
    }
    return out.str();
}

}  // namespace adaptq
