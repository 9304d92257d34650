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

// Equations of motion at three tiers:
//   - scalar Bloch-angle SDEs (closed loop, and the true/nominal coupled pair),
//   - the 2x2 stochastic master equation with measurement record and nominal filter,
//   - the model linearized around the target.
//
// Sign convention: dW is the record noise, dy = Tr(sigma rho) dt + dW. The Ito reduction
// of the SME to the Bloch angle then reads
//   d delta = [2 Delta - 2k sin(2(delta - theta))] dt - sqrt(8k) sin(delta - theta) dW.
// Everything is integrated in the Ito sense.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "mat2.hpp"
#include "policies.hpp"
#include "qubit.hpp"
#include "sde.hpp"

namespace adaptq {

enum class Integrator {
    euler_maruyama,
    milstein,  ///< order one: 1/2 b b' (dW^2 - dt) for scalars, Kraus form for matrices; action held over the step
};

struct ScalarDriftDiffusion {
    double drift;
    double diffusion;
};

inline ScalarDriftDiffusion scalar_coeffs(double delta, double theta, double k, double Delta) {
    if (!(k >= 0.0)) throw ArgumentError("measurement strength must be >= 0");
    const double phi = delta - theta;
    return {2.0 * Delta - 2.0 * k * std::sin(2.0 * phi), -std::sqrt(8.0 * k) * std::sin(phi)};
}

/// d(diffusion)/d(delta) with the action held fixed.
inline double scalar_diffusion_slope(double delta, double theta, double k) {
    return -std::sqrt(8.0 * k) * std::cos(delta - theta);
}

/// d(diffusion)/d(delta) of the closed loop, where the action itself follows delta.
inline double closed_loop_diffusion_slope(const SchemeConfig &scheme, double delta) {
    if (const auto *r = std::get_if<Robust>(&scheme)) {
        const double beta = 1.0 - r->alpha;
        return -std::sqrt(8.0 * r->k) * beta * std::cos(beta * delta);
    }
    if (const auto *j = std::get_if<Jacobs>(&scheme)) {
        // diffusion is sqrt(8 kappa) * fold(delta)
        const double w = wrap_angle(delta);
        return w == 0.0 ? 0.0 : std::copysign(std::sqrt(8.0 * j->kappa), w);
    }
    return 0.0;
}

namespace detail {
inline double checked(double x, const char *what) {
    if (!std::isfinite(x)) throw IntegrationError(std::string("non-finite ") + what, 0);
    return x;
}
}  // namespace detail

/// One step with the policy evaluated at delta itself (Delta known to the controller).
inline double step_scalar_closed_loop(double delta, const SchemeConfig &scheme, double Delta, double dt, double dW,
                                      Integrator integ = Integrator::euler_maruyama) {
    const auto act = policy(scheme, delta);
    const auto c = scalar_coeffs(delta, act.theta, act.strength, Delta);
    double next = delta + c.drift * dt + c.diffusion * dW;
    if (integ == Integrator::milstein)
        next += 0.5 * c.diffusion * closed_loop_diffusion_slope(scheme, delta) * (dW * dW - dt);
    return detail::checked(next, "Bloch angle");
}

/// d delta = 2 Delta dt - 4 k beta delta dt - sqrt(8k) beta delta dW.
inline double step_linearized(double delta, double k, double alpha, double Delta, double dt, double dW,
                              Integrator integ = Integrator::euler_maruyama) {
    if (!(k > 0.0)) throw ArgumentError("measurement strength must be > 0");
    const double beta = TuningParams(alpha).beta();
    const double slope = -std::sqrt(8.0 * k) * beta;
    double next = delta + (2.0 * Delta - 4.0 * k * beta * delta) * dt + slope * delta * dW;
    if (integ == Integrator::milstein) next += 0.5 * slope * slope * delta * (dW * dW - dt);
    return detail::checked(next, "Bloch angle");
}

struct CoupledState {
    double delta;          ///< true angle
    double delta_nominal;  ///< filter estimate, tracked continuously
};

inline bool finite_state(const CoupledState &s) { return std::isfinite(s.delta) && std::isfinite(s.delta_nominal); }

struct DisturbanceSpec {
    double Delta = 0.0;          ///< true detuning (unknown to the controller)
    double Delta_nominal = 0.0;  ///< value assumed by the filter
};

struct RecordIncrement {
    double dy;
};

struct CoupledOptions {
    Integrator integrator = Integrator::euler_maruyama;
    bool flip_innovation = false;  ///< fault injection used by the verification suite
};

struct CoupledStep {
    CoupledState state;
    RecordIncrement record;
};

/// Shared dW threads through: true update, record, innovation, nominal update.
inline CoupledStep step_coupled(const CoupledState &s, const SchemeConfig &scheme, const DisturbanceSpec &dist,
                                double dt, double dW, const CoupledOptions &opt = {}) {
    const auto act = policy(scheme, s.delta_nominal);
    const bool milstein = opt.integrator == Integrator::milstein;

    const auto tc = scalar_coeffs(s.delta, act.theta, act.strength, dist.Delta);
    double delta = s.delta + tc.drift * dt + tc.diffusion * dW;
    if (milstein) delta += 0.5 * tc.diffusion * scalar_diffusion_slope(s.delta, act.theta, act.strength) * (dW * dW - dt);

    const double dy = std::cos(s.delta - act.theta) * dt + dW;
    double dnu = dy - std::cos(s.delta_nominal - act.theta) * dt;
    if (opt.flip_innovation) dnu = -dnu;

    const auto nc = scalar_coeffs(s.delta_nominal, act.theta, act.strength, dist.Delta_nominal);
    double nominal = s.delta_nominal + nc.drift * dt + nc.diffusion * dnu;
    if (milstein)
        nominal += 0.5 * nc.diffusion * scalar_diffusion_slope(s.delta_nominal, act.theta, act.strength) *
                   (dnu * dnu - dt);

    return {{detail::checked(delta, "true angle"), detail::checked(nominal, "nominal angle")}, {dy}};
}

inline constexpr double kPositivityTol = 1e-6;

/// Symmetrizes, renormalizes the trace and clamps small negative eigenvalues.
inline Density project_density(const Mat2 &m) {
    Density h = 0.5 * (m + m.adjoint());
    const double tr = h.trace().real();
    if (!(tr > 0.0) || !all_finite(h)) throw PositivityError("density matrix lost its trace", tr);
    h *= cplx{1.0 / tr};
    h(0, 0) = h(0, 0).real();
    h(1, 1) = h(1, 1).real();
    const auto ev = hermitian_eigenvalues(h);
    if (ev[0] < -kPositivityTol)
        throw PositivityError("density matrix eigenvalue " + std::to_string(ev[0]) + " below tolerance", ev[0]);
    if (ev[0] < 0.0) {
        // rank-one projector onto the dominant eigenvector
        const double p = h(0, 0).real(), q = h(1, 1).real(), lam = ev[1];
        std::array<cplx, 2> v1{h(0, 1), cplx{lam - p}};
        std::array<cplx, 2> v2{cplx{lam - q}, h(1, 0)};
        const double n1 = std::norm(v1[0]) + std::norm(v1[1]);
        const double n2 = std::norm(v2[0]) + std::norm(v2[1]);
        const auto &v = n1 >= n2 ? v1 : v2;
        const double n = std::max(n1, n2);
        if (n == 0.0) return h;
        h = {{v[0] * std::conj(v[0]) / n, v[0] * std::conj(v[1]) / n, v[1] * std::conj(v[0]) / n,
              v[1] * std::conj(v[1]) / n}};
    }
    return h;
}

namespace detail {

// step_sme with sin/cos of the axis angle precomputed.
inline Density sme_kernel(const Density &rho, double sn, double cs, double k, double Delta, double dt, double dW,
                          Integrator integ) {
    if (!(k >= 0.0)) throw ArgumentError("measurement strength must be >= 0");
    const Mat2 s{{cplx{cs}, cplx{sn}, cplx{sn}, cplx{-cs}}};
    const double e = cs * (rho(0, 0) - rho(1, 1)).real() + 2.0 * sn * rho(0, 1).real();
    const double g = std::sqrt(2.0 * k);

    if (integ == Integrator::milstein) {
        const double dY = dW + 2.0 * g * e * dt;
        // c^2 = 2k I because sigma^2 = I
        const double diag = 1.0 - k * dt + k * (dY * dY - dt);
        const Mat2 M = diag * Mat2::identity() + (g * dY) * s + cplx{0.0, -Delta * dt} * pauli::y;
        return project_density(M * rho * M.adjoint());
    }

    // [sigma,[sigma,rho]] = 2 (rho - sigma rho sigma) since sigma^2 = I
    const Mat2 drift = cplx{0.0, -Delta} * (pauli::y * rho - rho * pauli::y) + 2.0 * k * (s * rho * s - rho);
    const Mat2 back = g * (s * rho + rho * s - 2.0 * e * rho);
    return project_density(rho + drift * dt + back * dW);
}

}  // namespace detail

/// d rho = -i Delta [sigma_y, rho] dt - k [sigma, [sigma, rho]] dt
///         + sqrt(2k) (sigma rho + rho sigma - 2 Tr(sigma rho) rho) dW,  sigma = sigma(theta).
///
/// Euler-Maruyama is followed by project_density. The order-one step uses the Kraus
/// form rho -> M rho M^dag / Tr with c = sqrt(2k) sigma,
///   M = I - i Delta sigma_y dt - c^2 dt / 2 + c dY + c^2 (dY^2 - dt) / 2,
///   dY = dW + 2 Tr(c rho) dt,
/// which keeps pure states pure and never leaves the positive cone.
inline Density step_sme(const Density &rho, double theta, double k, double Delta, double dt, double dW,
                        Integrator integ = Integrator::euler_maruyama) {
    if (!std::isfinite(theta)) throw ArgumentError("axis angle must be finite");
    return detail::sme_kernel(rho, std::sin(theta), std::cos(theta), k, Delta, dt, dW, integ);
}

inline RecordIncrement record_increment(const Density &rho, double theta, double dt, double dW) {
    return {expectation(theta, rho) * dt + dW};
}

/// Nominal-state update driven by the innovation dy - Tr(sigma rho') dt.
inline Density step_filter(const Density &rho_nominal, double theta, double k, double Delta_nominal, double dt,
                           double dy, Integrator integ = Integrator::euler_maruyama) {
    const double dnu = dy - expectation(theta, rho_nominal) * dt;
    return step_sme(rho_nominal, theta, k, Delta_nominal, dt, dnu, integ);
}

/// Matrix-tier true/nominal pair. The angles are the polar angles of rho and rho',
/// unwrapped by continuity so that they are comparable to the scalar tier.
struct MatrixCoupledState {
    Density rho;
    Density rho_nominal;
    double delta;
    double delta_nominal;

    static MatrixCoupledState from_angles(double delta0, double delta0_nominal) {
        return {state_from_angle(delta0), state_from_angle(delta0_nominal), delta0, delta0_nominal};
    }
};

inline bool finite_state(const MatrixCoupledState &s) {
    return all_finite(s.rho) && all_finite(s.rho_nominal) && std::isfinite(s.delta) && std::isfinite(s.delta_nominal);
}

struct MatrixCoupledStep {
    MatrixCoupledState state;
    RecordIncrement record;
};

inline MatrixCoupledStep step_matrix_coupled(const MatrixCoupledState &s, const SchemeConfig &scheme,
                                             const DisturbanceSpec &dist, double dt, double dW,
                                             Integrator integ = Integrator::euler_maruyama) {
    const auto act = policy(scheme, s.delta_nominal);
    if (!std::isfinite(act.theta)) throw ArgumentError("axis angle must be finite");
    const double sn = std::sin(act.theta), cs = std::cos(act.theta);
    const auto expect = [&](const Density &r) { return cs * (r(0, 0) - r(1, 1)).real() + 2.0 * sn * r(0, 1).real(); };
    const RecordIncrement rec{expect(s.rho) * dt + dW};
    const double dnu = rec.dy - expect(s.rho_nominal) * dt;
    MatrixCoupledState out;
    out.rho = detail::sme_kernel(s.rho, sn, cs, act.strength, dist.Delta, dt, dW, integ);
    out.rho_nominal = detail::sme_kernel(s.rho_nominal, sn, cs, act.strength, dist.Delta_nominal, dt, dnu, integ);
    out.delta = s.delta + wrap_angle(polar_angle(out.rho) - s.delta);
    out.delta_nominal = s.delta_nominal + wrap_angle(polar_angle(out.rho_nominal) - s.delta_nominal);
    return {out, rec};
}

/// F = (1 + cos delta) / 2 elementwise.
inline std::vector<double> fidelity_path(std::span<const double> deltas) {
    std::vector<double> out;
    out.reserve(deltas.size());
    for (double d : deltas) out.push_back(0.5 * (1.0 + std::cos(d)));
    return out;
}

/// Applies `prim(state, sub_dt, sub_dW)` over `m` Brownian-bridge sub-increments of the
/// engine increment dW. `scratch` avoids reallocating per step.
template <class State, class Prim>
State substep(State s, Prim &&prim, std::uint64_t seed, std::uint64_t path_id, std::size_t step, double dW, double dt,
              std::size_t m, std::vector<double> &scratch) {
    if (m <= 1) return prim(std::move(s), dt, dW);
    scratch.resize(m);
    refine_increment(seed, path_id, step, dW, dt, scratch);
    const double h = dt / static_cast<double>(m);
    for (double w : scratch) s = prim(std::move(s), h, w);
    return s;
}

}  // namespace adaptq
