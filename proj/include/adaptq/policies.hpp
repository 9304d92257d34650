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

// Adaptive measurement laws: nominal Bloch angle -> (axis, strength).

#include <cmath>
#include <string>
#include <variant>

#include "errors.hpp"
#include "qubit.hpp"

namespace adaptq {

struct MeasurementAction {
    double theta;     ///< axis of the measured observable sigma(theta)
    double strength;  ///< k >= 0
};

/// Axis perpendicular to the state, strength kappa * fold(delta)^2.
struct Jacobs {
    double kappa = 1.0;
};
/// Axis at alpha*delta between target and state, constant strength.
struct Robust {
    double k = 4.0;
    double alpha = 0.5;
};
/// Jacobs' axis with a constant strength. Does not converge; kept for the comparison.
struct JacobsConstant {
    double k = 4.0;
};

using SchemeConfig = std::variant<Jacobs, Robust, JacobsConstant>;

inline void validate(const SchemeConfig &scheme) {
    std::visit(
        [](const auto &s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Jacobs>) {
                if (!(s.kappa > 0.0 && std::isfinite(s.kappa))) throw ConfigError("kappa", "must be > 0");
            } else {
                if (!(s.k > 0.0 && std::isfinite(s.k))) throw ConfigError("k", "must be > 0");
                if constexpr (std::is_same_v<S, Robust>) {
                    if (!(s.alpha >= 0.0 && s.alpha <= 1.0)) throw ConfigError("alpha", "must lie in [0, 1]");
                }
            }
        },
        scheme);
}

inline std::string scheme_name(const SchemeConfig &scheme) {
    switch (scheme.index()) {
        case 0:
            return "jacobs";
        case 1:
            return "robust";
        default:
            return "jacobs_constant";
    }
}

// Jacobs measures sigma_x cos(delta) - sigma_z sin(delta), which is sigma(delta + pi/2).
inline MeasurementAction jacobs_policy(double delta_nominal, double kappa) {
    if (!(kappa > 0.0)) throw ConfigError("kappa", "must be > 0");
    const double d = fold(delta_nominal);
    return {delta_nominal + 0.5 * kPi, kappa * d * d};
}

/// `delta_nominal` is the continuously tracked (unwrapped) estimate.
inline MeasurementAction robust_policy(double delta_nominal, double k, double alpha) {
    if (!(k > 0.0)) throw ConfigError("k", "must be > 0");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha", "must lie in [0, 1]");
    return {alpha * delta_nominal, k};
}

inline MeasurementAction jacobs_constant_policy(double delta_nominal, double k) {
    if (!(k > 0.0)) throw ConfigError("k", "must be > 0");
    return {delta_nominal + 0.5 * kPi, k};
}

inline MeasurementAction policy(const SchemeConfig &scheme, double delta_nominal) {
    if (const auto *j = std::get_if<Jacobs>(&scheme)) return jacobs_policy(delta_nominal, j->kappa);
    if (const auto *r = std::get_if<Robust>(&scheme)) return robust_policy(delta_nominal, r->k, r->alpha);
    return jacobs_constant_policy(delta_nominal, std::get<JacobsConstant>(scheme).k);
}

/// dt-coefficient of d<0|rho|0> under the robust law:
/// -Delta sin(delta) + k [cos(2 alpha delta - delta) - cos(delta)].
inline double fidelity_drift(double delta, double alpha, double k, double Delta) {
    return -Delta * std::sin(delta) + k * (std::cos(2.0 * alpha * delta - delta) - std::cos(delta));
}

/// Maximizer of the k-proportional part of fidelity_drift for every delta in (0, pi).
inline constexpr double optimal_alpha() { return 0.5; }

}  // namespace adaptq
