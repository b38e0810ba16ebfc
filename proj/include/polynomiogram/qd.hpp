#pragma once

// Quad-double values (four non-overlapping doubles, ~212 bits) with the two
// operations Horner evaluation needs: addition and multiplication. Used to
// evaluate polynomials well below the rounding level of double-double
// iterates.

#include "polynomiogram/dd.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace polynomiogram {

struct qd_real
{
    std::array<double, 4> x{0.0, 0.0, 0.0, 0.0};

    constexpr qd_real() = default;
    constexpr qd_real(double a) : x{a, 0.0, 0.0, 0.0} {}
    qd_real(const dd_real& a) : x{a.hi, a.lo, 0.0, 0.0} {}
};

namespace qd_detail {

// Compresses m arbitrary doubles into a 4-term non-overlapping expansion.
template <std::size_t M>
qd_real renormalize(std::array<double, M>& v)
{
    std::sort(v.begin(), v.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
    // Bottom-up distillation: v[0] becomes the rounded sum, the rest its exact errors.
    for (std::size_t i = M - 1; i > 0; --i) {
        const dd_real s = dd_detail::two_sum(v[i - 1], v[i]);
        v[i - 1] = s.hi;
        v[i] = s.lo;
    }
    qd_real out;
    std::size_t k = 0;
    double s = v[0];
    std::size_t i = 1;
    for (; i < M && k < 3; ++i) {
        const dd_real t = dd_detail::two_sum(s, v[i]);
        if (t.lo != 0.0) {
            out.x[k++] = t.hi;
            s = t.lo;
        } else {
            s = t.hi;
        }
    }
    for (; i < M; ++i)
        s += v[i];
    out.x[k] = s;
    return out;
}

} // namespace qd_detail

inline qd_real operator+(const qd_real& a, const qd_real& b)
{
    std::array<double, 8> v{a.x[0], a.x[1], a.x[2], a.x[3], b.x[0], b.x[1], b.x[2], b.x[3]};
    return qd_detail::renormalize(v);
}

inline qd_real operator-(const qd_real& a, const qd_real& b)
{
    std::array<double, 8> v{a.x[0], a.x[1], a.x[2], a.x[3], -b.x[0], -b.x[1], -b.x[2], -b.x[3]};
    return qd_detail::renormalize(v);
}

inline qd_real operator*(const qd_real& a, const qd_real& b)
{
    std::array<double, 16> v{};
    std::size_t k = 0;
    // Exact products for every pair with i + j <= 2; rounded products at order 3.
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; i + j < 3; ++j) {
            const dd_real p = dd_detail::two_prod(a.x[i], b.x[j]);
            v[k++] = p.hi;
            v[k++] = p.lo;
        }
    for (std::size_t i = 0; i < 4; ++i)
        v[k++] = a.x[i] * b.x[3 - i];
    return qd_detail::renormalize(v);
}

inline qd_real operator-(const qd_real& a) { return qd_real{} - a; }

inline double to_double(const qd_real& a) { return a.x[0] + (a.x[1] + (a.x[2] + a.x[3])); }

inline dd_real to_dd(const qd_real& a)
{
    const dd_real hi = dd_detail::two_sum(a.x[0], a.x[1]);
    return hi + dd_real(a.x[2] + a.x[3]);
}

} // namespace polynomiogram
