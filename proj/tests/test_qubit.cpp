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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "adaptq/mat2.hpp"
#include "adaptq/qubit.hpp"

using namespace adaptq;

namespace {

Density random_pure(std::mt19937_64 &rng) {
    std::normal_distribution<double> n;
    cplx a{n(rng), n(rng)}, b{n(rng), n(rng)};
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    a /= norm;
    b /= norm;
    return {{a * std::conj(a), a * std::conj(b), b * std::conj(a), b * std::conj(b)}};
}

}  // namespace

TEST(Mat2, PauliAlgebra) {
    EXPECT_LT(max_abs(pauli::x * pauli::y - cplx{0, 1} * pauli::z), 1e-15);
    EXPECT_LT(max_abs(pauli::y * pauli::z - cplx{0, 1} * pauli::x), 1e-15);
    EXPECT_LT(max_abs(pauli::z * pauli::z - Mat2::identity()), 1e-15);
}

TEST(Mat2, ProductMatchesComplexReference) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    Mat2 a, b;
    for (auto &v : a.a) v = {n(rng), n(rng)};
    for (auto &v : b.a) v = {n(rng), n(rng)};
    const Mat2 c = a * b;
    for (int r = 0; r < 2; ++r)
        for (int k = 0; k < 2; ++k) {
            const cplx ref = a(r, 0) * b(0, k) + a(r, 1) * b(1, k);
            EXPECT_NEAR(std::abs(c(r, k) - ref), 0.0, 1e-14);
        }
}

TEST(Mat2, HermitianEigenvalues) {
    const Mat2 m{{cplx{2}, cplx{0, 1}, cplx{0, -1}, cplx{2}}};
    const auto ev = hermitian_eigenvalues(m);
    EXPECT_NEAR(ev[0], 1.0, 1e-15);
    EXPECT_NEAR(ev[1], 3.0, 1e-15);
}

TEST(Angles, WrapAndFold) {
    EXPECT_DOUBLE_EQ(wrap_angle(kPi), kPi);
    EXPECT_NEAR(wrap_angle(-kPi), kPi, 1e-15);
    EXPECT_NEAR(wrap_angle(3.0 * kPi / 2.0), -kPi / 2.0, 1e-15);
    EXPECT_NEAR(fold(-0.3), 0.3, 1e-15);
    EXPECT_NEAR(fold(2.0 * kPi - 0.3), 0.3, 1e-14);
    EXPECT_NEAR(fold(kPi), kPi, 1e-15);
    for (double d = -20.0; d < 20.0; d += 0.173) {
        const double w = wrap_angle(d);
        EXPECT_GT(w, -kPi);
        EXPECT_LE(w, kPi);
        EXPECT_NEAR(std::remainder(w - d, 2.0 * kPi), 0.0, 1e-12);
    }
}

TEST(Qubit, AxisObservableExamples) {
    EXPECT_LT(max_abs(axis_observable(0.0) - pauli::z), 1e-15);
    EXPECT_LT(max_abs(axis_observable(kPi / 2.0) - pauli::x), 1e-15);
    EXPECT_THROW(axis_observable(NAN), ArgumentError);
}

TEST(Qubit, AxisObservableSquaresToIdentity) {
    for (double th = -7.0; th < 7.0; th += 0.31) {
        const Mat2 s = axis_observable(th);
        EXPECT_LT(max_abs(s * s - Mat2::identity()), 1e-14);
        EXPECT_LT(max_abs(s - s.adjoint()), 1e-15);
    }
}

TEST(Qubit, EigenvectorsOfAxisObservable) {
    for (double th = -3.0; th < 3.0; th += 0.37) {
        const Mat2 s = axis_observable(th);
        const auto p = plus_eigenvector(th), m = minus_eigenvector(th);
        for (int r = 0; r < 2; ++r) {
            EXPECT_NEAR((s(r, 0) * p[0] + s(r, 1) * p[1]).real(), p[r], 1e-14);
            EXPECT_NEAR((s(r, 0) * m[0] + s(r, 1) * m[1]).real(), -m[r], 1e-14);
        }
    }
}

TEST(Qubit, StateFromAngleExamples) {
    const Density one = state_from_angle(kPi);
    EXPECT_NEAR(one(1, 1).real(), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(one(0, 0)), 0.0, 1e-15);
    const auto r = bloch_vector(state_from_angle(kPi / 2.0));
    EXPECT_NEAR(r.x, 1.0, 1e-15);
    EXPECT_NEAR(r.y, 0.0, 1e-15);
    EXPECT_NEAR(r.z, 0.0, 1e-15);
}

TEST(Qubit, BlochAngleRoundTrip) {
    for (double d = -3.1; d <= kPi; d += 0.05) EXPECT_NEAR(bloch_angle(state_from_angle(d)), d, 1e-12);
    EXPECT_NEAR(bloch_angle(state_from_angle(kPi)), kPi, 1e-12);
}

TEST(Qubit, BlochAngleRejectsOffPlaneOrMixed) {
    Density off = 0.5 * (Mat2::identity() + pauli::y);
    EXPECT_THROW(bloch_angle(off), DomainError);
    Density mixed = 0.5 * Mat2::identity();
    EXPECT_THROW(bloch_angle(mixed), DomainError);
}

TEST(Qubit, TransitionProbabilities) {
    const auto p = transition_probs(kPi, 0.5);
    EXPECT_NEAR(p.p_plus, 0.5, 1e-15);
    EXPECT_NEAR(p.p_minus, 0.5, 1e-15);
    const auto q = transition_probs(0.0, 0.5);
    EXPECT_NEAR(q.p_plus, 1.0, 1e-15);
    EXPECT_NEAR(q.p_minus, 0.0, 1e-15);
}

// Born rule against the explicit projector onto the +1 eigenvector of sigma(alpha delta).
TEST(Qubit, TransitionProbabilitiesMatchBornRule) {
    for (double alpha : {0.25, 0.5, 0.75})
        for (double d = -3.0; d < 3.0; d += 0.41) {
            const auto e = plus_eigenvector(alpha * d);
            const auto psi = ket_from_angle(d);
            const double overlap = e[0] * psi[0] + e[1] * psi[1];
            const auto p = transition_probs(d, alpha);
            EXPECT_NEAR(p.p_plus, overlap * overlap, 1e-14);
            EXPECT_NEAR(p.p_plus + p.p_minus, 1.0, 1e-15);
        }
}

TEST(Qubit, TuningParams) {
    EXPECT_DOUBLE_EQ(TuningParams(0.5).beta(), 0.5);
    EXPECT_DOUBLE_EQ(TuningParams(0.25).beta(), 0.75);
    EXPECT_THROW(TuningParams(1.5), ArgumentError);
    EXPECT_THROW(TuningParams(-0.1), ArgumentError);
}

TEST(Qubit, ExpectationMatchesTrace) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const Density rho = random_pure(rng);
        const double th = 0.13 * i - 3.0;
        EXPECT_NEAR(expectation(th, rho), (axis_observable(th) * rho).trace().real(), 1e-14);
    }
}

TEST(Qubit, ValidityAndPurity) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const Density rho = random_pure(rng);
        EXPECT_TRUE(is_valid_density(rho));
        EXPECT_NEAR(purity(rho), 1.0, 1e-14);
    }
    EXPECT_FALSE(is_valid_density(Density{{cplx{1.2}, cplx{0}, cplx{0}, cplx{-0.2}}}));
    EXPECT_NEAR(fidelity_target(state_from_angle(kPi / 2.0)), 0.5, 1e-15);
}
