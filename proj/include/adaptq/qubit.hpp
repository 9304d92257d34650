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

// Qubit geometry on the x-z great circle of the Bloch sphere.
//
// A pure state with Bloch angle delta is cos(delta/2)|0> + sin(delta/2)|1>; its Bloch
// vector is (sin delta, 0, cos delta). delta = 0 is the target |0>, delta = pi is |1>.
// The measured observable with axis theta is sigma(theta) = sigma_x sin(theta) + sigma_z cos(theta).

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "mat2.hpp"

namespace adaptq {

using Density = Mat2;

inline constexpr double kPi = std::numbers::pi;

/// Maps an unconstrained angle into (-pi, pi].
inline double wrap_angle(double delta) {
    if (delta > -kPi && delta <= kPi) return delta;
    double w = std::remainder(delta, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

/// Angular distance to the target, in [0, pi]. Even, and the identity on [0, pi].
inline double fold(double delta) { return std::abs(wrap_angle(delta)); }

/// Axis-division parameter of the robust scheme. beta is always derived.
class TuningParams {
   public:
    explicit TuningParams(double alpha) : alpha_(alpha) {
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw ArgumentError("alpha must lie in [0, 1]");
    }
    double alpha() const { return alpha_; }
    double beta() const { return 1.0 - alpha_; }

   private:
    double alpha_;
};

inline Mat2 axis_observable(double theta) {
    if (!std::isfinite(theta)) throw ArgumentError("axis angle must be finite");
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    return {{cplx{c}, cplx{s}, cplx{s}, cplx{-c}}};
}

/// Ket (cos(delta/2), sin(delta/2)).
inline std::array<double, 2> ket_from_angle(double delta) { return {std::cos(0.5 * delta), std::sin(0.5 * delta)}; }

inline Density state_from_angle(double delta) {
    if (!std::isfinite(delta)) throw ArgumentError("Bloch angle must be finite");
    const auto [c, s] = ket_from_angle(delta);
    return {{cplx{c * c}, cplx{c * s}, cplx{c * s}, cplx{s * s}}};
}

/// +1 eigenvector of sigma(theta); for theta = alpha*delta this is |+_Z>.
inline std::array<double, 2> plus_eigenvector(double theta) { return ket_from_angle(theta); }
/// -1 eigenvector of sigma(theta).
inline std::array<double, 2> minus_eigenvector(double theta) {
    return {std::sin(0.5 * theta), -std::cos(0.5 * theta)};
}

struct BlochVector {
    double x, y, z;
};

inline BlochVector bloch_vector(const Density &rho) {
    return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

inline double purity(const Density &rho) { return (rho * rho).trace().real(); }

/// Polar angle atan2(<sigma_x>, <sigma_z>) without any precondition check.
inline double polar_angle(const Density &rho) {
    const auto r = bloch_vector(rho);
    return std::atan2(r.x, r.z);
}

/// Inverse of state_from_angle on pure x-z states; result in (-pi, pi].
inline double bloch_angle(const Density &rho, double plane_tol = 1e-6, double purity_tol = 1e-6) {
    const auto r = bloch_vector(rho);
    if (std::abs(r.y) > plane_tol) throw DomainError("state is off the x-z plane: <sigma_y> = " + std::to_string(r.y), r.y);
    const double p = purity(rho);
    if (p < 1.0 - purity_tol) throw DomainError("state is mixed: purity = " + std::to_string(p), p);
    return std::atan2(r.x, r.z);
}

inline double expectation(double theta, const Density &rho) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    return c * (rho(0, 0) - rho(1, 1)).real() + 2.0 * s * rho(0, 1).real();
}

struct TransitionProbs {
    double p_plus;
    double p_minus;
};

/// Probabilities of the pure state delta jumping to |+_Z> / |-_Z> of the robust axis alpha*delta.
inline TransitionProbs transition_probs(double delta, double alpha) {
    const TuningParams tp(alpha);
    const double c = std::cos(tp.beta() * delta);
    return {0.5 * (1.0 + c), 0.5 * (1.0 - c)};
}

/// <0|rho|0>.
inline double fidelity_target(const Density &rho) { return rho(0, 0).real(); }

/// Hermitian, unit-trace and positive within the stated tolerances.
inline bool is_valid_density(const Density &rho, double herm_tol = 1e-12, double trace_tol = 1e-9,
                             double eig_tol = 1e-9) {
    if (!all_finite(rho)) return false;
    if (max_abs(rho - rho.adjoint()) > herm_tol) return false;
    if (std::abs(rho.trace() - cplx{1.0}) > trace_tol) return false;
    return hermitian_eigenvalues(rho)[0] >= -eig_tol;
}

}  // namespace adaptq
