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

// Ensembles of independent trajectories with streaming statistics of the folded
// target distance. Paths are grouped into fixed-size chunks; each chunk is reduced
// in path order and chunks are merged in chunk order, so results are bit-identical
// for any number of workers.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dynamics.hpp"
#include "errors.hpp"
#include "policies.hpp"
#include "qubit.hpp"
#include "sde.hpp"

namespace adaptq {

/// Streaming mean / variance (Welford), mergeable with Chan's update.
struct Moments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    void merge(const Moments &o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
        const double d = o.mean - mean;
        const double total = na + nb;
        mean += d * nb / total;
        m2 += o.m2 + d * d * na * nb / total;
        n += o.n;
    }

    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
    double stddev() const { return std::sqrt(std::max(0.0, variance())); }
    double standard_error() const { return n > 0 ? stddev() / std::sqrt(static_cast<double>(n)) : 0.0; }
};

struct EnsembleStats {
    std::vector<double> t;
    std::vector<Moments> delta;     ///< of fold(delta)
    std::vector<Moments> nominal;   ///< of fold(delta'); empty unless coupled
    std::vector<Moments> fidelity;  ///< of (1 + cos delta) / 2

    bool has_nominal() const { return !nominal.empty(); }

    void merge(const EnsembleStats &o) {
        if (t.empty()) {
            *this = o;
            return;
        }
        if (o.t.size() != t.size()) throw ArgumentError("cannot merge statistics over different time grids");
        for (std::size_t i = 0; i < t.size(); ++i) {
            delta[i].merge(o.delta[i]);
            fidelity[i].merge(o.fidelity[i]);
            if (has_nominal()) nominal[i].merge(o.nominal[i]);
        }
    }
};

enum class Tier { scalar_closed_loop, scalar_coupled, matrix_coupled, linearized };

inline bool is_coupled(Tier t) { return t == Tier::scalar_coupled || t == Tier::matrix_coupled; }

struct ExperimentConfig {
    std::string name = "run";
    SchemeConfig scheme = Robust{};
    double Delta = 0.0;
    double Delta_nominal = 0.0;
    double delta0 = kPi;
    double dt = 1e-4;
    double horizon = 5.0;
    std::uint64_t n_paths = 10000;
    std::size_t stride = 100;
    std::uint64_t seed = 42;
    Tier tier = Tier::scalar_closed_loop;
    Integrator integrator = Integrator::euler_maruyama;
    std::size_t substeps = 1;
    std::size_t n_show = 0;  ///< full-resolution sample paths written next to the statistics

    std::size_t n_steps() const { return static_cast<std::size_t>(std::llround(horizon / dt)); }
    TimeGrid grid() const { return {dt, n_steps()}; }

    void validate() const {
        adaptq::validate(scheme);
        auto finite = [](double v, const char *f) {
            if (!std::isfinite(v)) throw ConfigError(f, "must be finite");
        };
        finite(Delta, "Delta");
        finite(Delta_nominal, "Delta_nominal");
        finite(delta0, "delta0");
        if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "must be > 0");
        if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon", "must be > 0");
        if (n_steps() == 0) throw ConfigError("horizon", "shorter than one step");
        if (n_paths < 1) throw ConfigError("paths", "must be >= 1");
        if (stride < 1) throw ConfigError("stride", "must be >= 1");
        if (substeps < 1 || substeps > kMaxSubsteps) throw ConfigError("substeps", "must lie in [1, 65536]");
        if (tier == Tier::linearized && !std::holds_alternative<Robust>(scheme))
            throw ConfigError("tier", "the linearized model exists for the robust scheme only");
    }
};

/// Recorded quantities of one trajectory. For uncoupled tiers delta_nominal == delta.
struct PathSample {
    double delta;
    double delta_nominal;
};

/// Record times for a configuration: every `stride` steps plus the final step.
inline std::vector<std::size_t> record_steps(const ExperimentConfig &cfg) {
    std::vector<std::size_t> steps;
    const std::size_t n = cfg.n_steps();
    for (std::size_t s = 0; s <= n; s += cfg.stride) steps.push_back(s);
    if (steps.back() != n) steps.push_back(n);
    return steps;
}

/// Integrates one trajectory and calls `visit(record_index, t, sample)` at each record.
template <class Visitor>
void simulate_path(const ExperimentConfig &cfg, std::uint64_t path_id, Visitor &&visit) {
    const std::size_t n = cfg.n_steps();
    const double dt = cfg.dt;
    const std::size_t m = cfg.substeps;
    const DisturbanceSpec dist{cfg.Delta, cfg.Delta_nominal};
    std::vector<double> scratch;
    std::size_t rec = 0;

    auto run = [&](auto state, auto &&prim, auto &&sample) {
        visit(rec++, 0.0, sample(state));
        std::size_t step = 0;
        try {
            for (; step < n; ++step) {
                const double dW = wiener_increment(cfg.seed, path_id, step, dt);
                state = substep(std::move(state), prim, cfg.seed, path_id, step, dW, dt, m, scratch);
                if (!finite_state(state)) throw IntegrationError("non-finite state", step);
                if ((step + 1) % cfg.stride == 0 || step + 1 == n) visit(rec++, cfg.grid().time(step + 1), sample(state));
            }
        } catch (PositivityError &e) {
            throw PositivityError(std::string(e.what()) + " (path " + std::to_string(path_id) + ", step " +
                                      std::to_string(step) + ")",
                                  e.min_eigenvalue, step, path_id);
        } catch (IntegrationError &e) {
            throw IntegrationError(std::string(e.what()) + " (path " + std::to_string(path_id) + ", step " +
                                       std::to_string(step) + ")",
                                   step, path_id);
        }
    };

    switch (cfg.tier) {
        case Tier::scalar_closed_loop:
            run(
                cfg.delta0,
                [&](double d, double h, double w) {
                    return step_scalar_closed_loop(d, cfg.scheme, cfg.Delta, h, w, cfg.integrator);
                },
                [](double d) { return PathSample{d, d}; });
            break;
        case Tier::linearized: {
            const auto &r = std::get<Robust>(cfg.scheme);
            run(
                cfg.delta0,
                [&](double d, double h, double w) { return step_linearized(d, r.k, r.alpha, cfg.Delta, h, w, cfg.integrator); },
                [](double d) { return PathSample{d, d}; });
            break;
        }
        case Tier::scalar_coupled: {
            const CoupledOptions opt{cfg.integrator, false};
            run(
                CoupledState{cfg.delta0, cfg.delta0},
                [&](const CoupledState &s, double h, double w) { return step_coupled(s, cfg.scheme, dist, h, w, opt).state; },
                [](const CoupledState &s) { return PathSample{s.delta, s.delta_nominal}; });
            break;
        }
        case Tier::matrix_coupled:
            run(
                MatrixCoupledState::from_angles(cfg.delta0, cfg.delta0),
                [&](const MatrixCoupledState &s, double h, double w) {
                    return step_matrix_coupled(s, cfg.scheme, dist, h, w, cfg.integrator).state;
                },
                [](const MatrixCoupledState &s) { return PathSample{s.delta, s.delta_nominal}; });
            break;
    }
}

inline PathRecord<PathSample> simulate_path(const ExperimentConfig &cfg, std::uint64_t path_id) {
    PathRecord<PathSample> out;
    simulate_path(cfg, path_id, [&](std::size_t, double t, const PathSample &s) {
        out.t.push_back(t);
        out.state.push_back(s);
    });
    return out;
}

inline constexpr std::uint64_t kChunkPaths = 64;

namespace detail {

inline EnsembleStats empty_stats(const ExperimentConfig &cfg) {
    EnsembleStats st;
    for (auto s : record_steps(cfg)) st.t.push_back(cfg.grid().time(s));
    st.delta.resize(st.t.size());
    st.fidelity.resize(st.t.size());
    if (is_coupled(cfg.tier)) st.nominal.resize(st.t.size());
    return st;
}

/// Runs `job(i)` for i in [0, count) on `workers` threads and rethrows the error of
/// the lowest failing index.
template <class Job>
void parallel_for(std::uint64_t count, unsigned workers, Job &&job) {
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> stop{false};
    auto worker = [&] {
        for (;;) {
            const auto i = next.fetch_add(1);
            if (i >= count || stop.load()) return;
            try {
                job(i);
            } catch (...) {
                errors[i] = std::current_exception();
                stop.store(true);
            }
        }
    };
    workers = std::max(1u, workers);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto &th : pool) th.join();
    }
    for (auto &e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace detail

inline EnsembleStats run_ensemble(const ExperimentConfig &cfg, unsigned workers = 1) {
    cfg.validate();
    const std::uint64_t n_chunks = (cfg.n_paths + kChunkPaths - 1) / kChunkPaths;
    std::vector<EnsembleStats> partial(n_chunks);
    const bool coupled = is_coupled(cfg.tier);
    detail::parallel_for(n_chunks, workers, [&](std::uint64_t c) {
        EnsembleStats st = detail::empty_stats(cfg);
        const std::uint64_t end = std::min(cfg.n_paths, (c + 1) * kChunkPaths);
        for (std::uint64_t p = c * kChunkPaths; p < end; ++p) {
            simulate_path(cfg, p, [&](std::size_t i, double, const PathSample &s) {
                st.delta[i].add(fold(s.delta));
                st.fidelity[i].add(0.5 * (1.0 + std::cos(s.delta)));
                if (coupled) st.nominal[i].add(fold(s.delta_nominal));
            });
        }
        partial[c] = std::move(st);
    });
    EnsembleStats total;
    for (const auto &p : partial) total.merge(p);
    return total;
}

/// Recorded trajectories of paths 0 .. n_show-1. Uncoupled tiers repeat delta as delta'.
inline std::vector<PathRecord<PathSample>> run_sample_paths(const ExperimentConfig &cfg, std::size_t n_show,
                                                            unsigned workers = 1) {
    cfg.validate();
    std::vector<PathRecord<PathSample>> out(n_show);
    detail::parallel_for(n_show, workers, [&](std::uint64_t p) { out[p] = simulate_path(cfg, p); });
    return out;
}

/// Final state of every path, in path order.
inline std::vector<PathSample> run_terminal(const ExperimentConfig &cfg, unsigned workers = 1) {
    cfg.validate();
    std::vector<PathSample> out(cfg.n_paths);
    const std::uint64_t n_chunks = (cfg.n_paths + kChunkPaths - 1) / kChunkPaths;
    detail::parallel_for(n_chunks, workers, [&](std::uint64_t c) {
        const std::uint64_t end = std::min(cfg.n_paths, (c + 1) * kChunkPaths);
        for (std::uint64_t p = c * kChunkPaths; p < end; ++p)
            simulate_path(cfg, p, [&](std::size_t, double, const PathSample &s) { out[p] = s; });
    });
    return out;
}

/// Time average of the folded mean over the final 20% of the horizon.
inline double long_run_error(const ExperimentConfig &cfg, unsigned workers = 1) {
    if (cfg.tier != Tier::scalar_closed_loop) throw ConfigError("tier", "long_run_error needs scalar_closed_loop");
    if (!(cfg.Delta > 0.0)) throw ConfigError("Delta", "long_run_error needs Delta > 0");
    const auto st = run_ensemble(cfg, workers);
    const double from = 0.8 * cfg.horizon;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < st.t.size(); ++i) {
        if (st.t[i] >= from - 1e-12) {
            sum += st.delta[i].mean;
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

}  // namespace adaptq
