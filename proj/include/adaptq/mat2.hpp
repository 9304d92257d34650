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

// Dense complex 2x2 matrices, stored as four entries in row-major order.

#include <array>
#include <cmath>
#include <complex>

namespace adaptq {

using cplx = std::complex<double>;

struct Mat2 {
    std::array<cplx, 4> a{};

    constexpr cplx &operator()(int r, int c) { return a[2 * r + c]; }
    constexpr const cplx &operator()(int r, int c) const { return a[2 * r + c]; }

    static constexpr Mat2 identity() { return {{cplx{1}, cplx{0}, cplx{0}, cplx{1}}}; }
    static constexpr Mat2 zero() { return {}; }

    constexpr cplx trace() const { return a[0] + a[3]; }

    constexpr Mat2 adjoint() const {
        return {{std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])}};
    }

    Mat2 &operator+=(const Mat2 &o) {
        for (int i = 0; i < 4; ++i) a[i] += o.a[i];
        return *this;
    }
    Mat2 &operator-=(const Mat2 &o) {
        for (int i = 0; i < 4; ++i) a[i] -= o.a[i];
        return *this;
    }
    Mat2 &operator*=(cplx s) {
        for (auto &x : a) x = {x.real() * s.real() - x.imag() * s.imag(), x.real() * s.imag() + x.imag() * s.real()};
        return *this;
    }
};

inline Mat2 operator+(Mat2 l, const Mat2 &r) { return l += r; }
inline Mat2 operator-(Mat2 l, const Mat2 &r) { return l -= r; }
inline Mat2 operator*(Mat2 m, cplx s) { return m *= s; }
inline Mat2 operator*(cplx s, Mat2 m) { return m *= s; }
inline Mat2 operator*(Mat2 m, double s) {
    for (auto &x : m.a) x = {x.real() * s, x.imag() * s};
    return m;
}
inline Mat2 operator*(double s, Mat2 m) { return m * s; }

namespace detail {
// Plain complex multiply-add; avoids the Annex G NaN recovery path of std::complex.
inline cplx dot2(cplx a, cplx b, cplx c, cplx d) {
    return {a.real() * b.real() - a.imag() * b.imag() + c.real() * d.real() - c.imag() * d.imag(),
            a.real() * b.imag() + a.imag() * b.real() + c.real() * d.imag() + c.imag() * d.real()};
}
}  // namespace detail

inline Mat2 operator*(const Mat2 &l, const Mat2 &r) {
    using detail::dot2;
    return {{dot2(l.a[0], r.a[0], l.a[1], r.a[2]), dot2(l.a[0], r.a[1], l.a[1], r.a[3]),
             dot2(l.a[2], r.a[0], l.a[3], r.a[2]), dot2(l.a[2], r.a[1], l.a[3], r.a[3])}};
}

/// Largest entry-wise modulus.
inline double max_abs(const Mat2 &m) {
    double best = 0.0;
    for (const auto &x : m.a) best = std::max(best, std::abs(x));
    return best;
}

inline bool all_finite(const Mat2 &m) {
    for (const auto &x : m.a) {
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    }
    return true;
}

/// Eigenvalues of a Hermitian matrix, ascending.
inline std::array<double, 2> hermitian_eigenvalues(const Mat2 &m) {
    const double p = m.a[0].real();
    const double q = m.a[3].real();
    const double half_gap = std::sqrt(0.25 * (p - q) * (p - q) + std::norm(m.a[1]));
    const double mid = 0.5 * (p + q);
    return {mid - half_gap, mid + half_gap};
}

namespace pauli {
inline constexpr Mat2 x{{cplx{0}, cplx{1}, cplx{1}, cplx{0}}};
inline constexpr Mat2 y{{cplx{0}, cplx{0, -1}, cplx{0, 1}, cplx{0}}};
inline constexpr Mat2 z{{cplx{1}, cplx{0}, cplx{0}, cplx{-1}}};
}  // namespace pauli

}  // namespace adaptq
