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

// Pathwise comparison of the scalar coupled tier against the matrix SME + filter tier
// on identical noise.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dynamics.hpp"
#include "montecarlo.hpp"
#include "qubit.hpp"
#include "sde.hpp"

namespace adaptq {

struct TierGap {
    double max_true = 0.0;     ///< max over records of |bloch angle(rho) - delta|
    double max_nominal = 0.0;  ///< same for rho' and delta'
    double min_purity = 1.0;   ///< smallest purity of rho or rho' seen at a record
    double max_gap() const { return std::max(max_true, max_nominal); }
};

struct CompareOptions {
    std::size_t substeps_far = 512;  ///< used while either scalar angle is farther than `far` from the target
    double far = kPi / 2;
    bool flip_innovation = false;
};

/// Integrates both tiers in lockstep, sharing every (sub-)increment. Uses the scheme,
/// disturbance, grid, integrator and substeps of `cfg`; `tier` is ignored.
///
/// Beyond pi/2 the closed loop is locally unstable and amplifies discretization
/// differences between the tiers, so steps that start there are refined further.
inline TierGap compare_tiers(const ExperimentConfig &cfg, std::uint64_t path_id, const CompareOptions &copt = CompareOptions{}) {
    cfg.validate();
    const DisturbanceSpec dist{cfg.Delta, cfg.Delta_nominal};
    const CoupledOptions opt{cfg.integrator, copt.flip_innovation};
    const std::size_t n = cfg.n_steps();
    const std::size_t m_far = std::max(copt.substeps_far, cfg.substeps);
    if (m_far > kMaxSubsteps) throw ConfigError("substeps", "at most " + std::to_string(kMaxSubsteps));

    CoupledState scalar{cfg.delta0, cfg.delta0};
    auto matrix = MatrixCoupledState::from_angles(cfg.delta0, cfg.delta0);
    std::vector<double> sub;
    TierGap gap;
    for (std::size_t step = 0; step < n; ++step) {
        const double dW = wiener_increment(cfg.seed, path_id, step, cfg.dt);
        const bool far_out = fold(scalar.delta) > copt.far || fold(scalar.delta_nominal) > copt.far;
        const std::size_t m = far_out ? m_far : cfg.substeps;
        const double h = cfg.dt / static_cast<double>(m);
        sub.resize(m);
        refine_increment(cfg.seed, path_id, step, dW, cfg.dt, sub);
        for (double w : sub) {
            scalar = step_coupled(scalar, cfg.scheme, dist, h, w, opt).state;
            matrix = step_matrix_coupled(matrix, cfg.scheme, dist, h, w, cfg.integrator).state;
        }
        if ((step + 1) % cfg.stride == 0 || step + 1 == n) {
            gap.max_true = std::max(gap.max_true, std::abs(wrap_angle(polar_angle(matrix.rho) - scalar.delta)));
            gap.max_nominal =
                std::max(gap.max_nominal, std::abs(wrap_angle(polar_angle(matrix.rho_nominal) - scalar.delta_nominal)));
            gap.min_purity = std::min({gap.min_purity, purity(matrix.rho), purity(matrix.rho_nominal)});
        }
    }
    return gap;
}

}  // namespace adaptq
