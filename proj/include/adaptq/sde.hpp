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

// Wiener increments on a uniform grid and a generic fixed-step driver.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "random.hpp"

namespace adaptq {

struct TimeGrid {
    double dt = 1e-4;
    std::size_t n_steps = 0;

    double time(std::size_t step) const { return static_cast<double>(step) * dt; }
    double horizon() const { return time(n_steps); }
};

struct NoiseSpec {
    std::uint64_t seed = 0;
    double dt = 1e-4;
    std::size_t n_steps = 0;
    std::uint64_t path_id = 0;

    void validate() const {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("dt must be > 0");
    }
    TimeGrid grid() const { return {dt, n_steps}; }
};

/// dW for engine step `step` of path `path_id`: N(0, dt).
inline double wiener_increment(std::uint64_t seed, std::uint64_t path_id, std::size_t step, double dt) {
    return std::sqrt(dt) * keyed_normal(seed, path_id, StreamDomain::increments, step);
}

inline std::vector<double> wiener_increments(const NoiseSpec &spec) {
    spec.validate();
    std::vector<double> out(spec.n_steps);
    for (std::size_t i = 0; i < spec.n_steps; ++i) out[i] = wiener_increment(spec.seed, spec.path_id, i, spec.dt);
    return out;
}

inline constexpr std::size_t kMaxSubsteps = std::size_t{1} << 16;

/// Splits the engine increment dW over [t, t+dt) into out.size() sub-increments
/// with the conditional (Brownian bridge) law. They sum to dW up to roundoff.
inline void refine_increment(std::uint64_t seed, std::uint64_t path_id, std::size_t step, double dW, double dt,
                             std::span<double> out) {
    const std::size_t m = out.size();
    if (m == 0 || m > kMaxSubsteps) throw ArgumentError("substep count must lie in [1, 65536]");
    if (m == 1) {
        out[0] = dW;
        return;
    }
    const double scale = std::sqrt(dt / static_cast<double>(m));
    double sum = 0.0;
    const std::uint64_t base = std::uint64_t{step} << 15;  // 2^15 pairs per step
    for (std::size_t i = 0; i < m; i += 2) {
        const auto z = keyed_normal_pair(seed, path_id, StreamDomain::refinement, base | (i >> 1));
        out[i] = scale * z[0];
        if (i + 1 < m) out[i + 1] = scale * z[1];
    }
    for (double x : out) sum += x;
    const double shift = (dW - sum) / static_cast<double>(m);
    for (auto &x : out) x += shift;
}

inline bool finite_state(double x) { return std::isfinite(x); }

template <class State>
struct PathRecord {
    std::vector<double> t;
    std::vector<State> state;
};

/// Applies `stepper(state, t, dW, dt)` once per increment and records the state every
/// `stride` steps, always including t = 0 and t = T.
template <class State, class Stepper>
PathRecord<State> integrate(State initial, Stepper &&stepper, const TimeGrid &grid,
                            std::span<const double> increments, std::size_t stride = 1) {
    if (stride == 0) throw ArgumentError("stride must be >= 1");
    if (increments.size() != grid.n_steps) throw ArgumentError("increment count does not match the grid");
    PathRecord<State> rec;
    rec.t.reserve(grid.n_steps / stride + 2);
    rec.state.reserve(grid.n_steps / stride + 2);
    rec.t.push_back(0.0);
    rec.state.push_back(initial);
    State s = std::move(initial);
    for (std::size_t i = 0; i < grid.n_steps; ++i) {
        s = stepper(s, grid.time(i), increments[i], grid.dt);
        if (!finite_state(s)) throw IntegrationError("non-finite state at step " + std::to_string(i), i);
        if ((i + 1) % stride == 0 || i + 1 == grid.n_steps) {
            rec.t.push_back(grid.time(i + 1));
            rec.state.push_back(s);
        }
    }
    return rec;
}

template <class State, class Stepper>
PathRecord<State> integrate(State initial, Stepper &&stepper, const NoiseSpec &noise, std::size_t stride = 1) {
    const auto dW = wiener_increments(noise);
    try {
        return integrate(std::move(initial), std::forward<Stepper>(stepper), noise.grid(), std::span<const double>(dW),
                         stride);
    } catch (IntegrationError &e) {
        e.path_id = noise.path_id;
        throw;
    }
}

}  // namespace adaptq
