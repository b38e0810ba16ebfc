#pragma once

// Double-double arithmetic: a value is the unevaluated sum hi + lo with
// |lo| <= ulp(hi)/2, giving about 106 significand bits. Built from the
// error-free transformations two_sum and two_prod (via fma).

#include <algorithm>
#include <cmath>
#include <complex>

namespace polynomiogram {

struct dd_real
{
    double hi = 0.0;
    double lo = 0.0;

    constexpr dd_real() = default;
    constexpr dd_real(double h) : hi(h), lo(0.0) {}
    constexpr dd_real(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

namespace dd_detail {

inline dd_real quick_two_sum(double a, double b)
{
    const double s = a + b;
    return {s, b - (s - a)};
}

inline dd_real two_sum(double a, double b)
{
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline dd_real two_prod(double a, double b)
{
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

} // namespace dd_detail

inline dd_real operator-(const dd_real& a) { return {-a.hi, -a.lo}; }

inline dd_real operator+(const dd_real& a, const dd_real& b)
{
    using namespace dd_detail;
    dd_real s = two_sum(a.hi, b.hi);
    dd_real t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline dd_real operator-(const dd_real& a, const dd_real& b) { return a + (-b); }

inline dd_real operator*(const dd_real& a, const dd_real& b)
{
    using namespace dd_detail;
    dd_real p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline dd_real operator/(const dd_real& a, const dd_real& b)
{
    // Long division: q1 from doubles, then two correction terms.
    const double q1 = a.hi / b.hi;
    dd_real r = a - b * dd_real(q1);
    const double q2 = r.hi / b.hi;
    r = r - b * dd_real(q2);
    const double q3 = r.hi / b.hi;
    dd_real q = dd_detail::quick_two_sum(q1, q2);
    return q + dd_real(q3);
}

inline dd_real& operator+=(dd_real& a, const dd_real& b) { return a = a + b; }
inline dd_real& operator-=(dd_real& a, const dd_real& b) { return a = a - b; }
inline dd_real& operator*=(dd_real& a, const dd_real& b) { return a = a * b; }
inline dd_real& operator/=(dd_real& a, const dd_real& b) { return a = a / b; }

inline bool operator==(const dd_real& a, const dd_real& b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator<(const dd_real& a, const dd_real& b)
{
    return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}

inline dd_real sqrt(const dd_real& a)
{
    if (a.hi <= 0.0)
        return {0.0, 0.0};
    // One Newton step on the double estimate doubles the precision.
    const double x = std::sqrt(a.hi);
    const dd_real xx = dd_detail::two_prod(x, x);
    const double corr = ((a - xx).hi) / (2.0 * x);
    return dd_detail::two_sum(x, corr);
}

inline dd_real abs(const dd_real& a) { return a.hi < 0.0 ? -a : a; }

inline double to_double(double x) { return x; }
inline double to_double(const dd_real& x) { return x.hi + x.lo; }

/// Minimal complex number over an arbitrary real type; std::complex is only
/// specified for the built-in floating-point types.
template <typename R>
struct basic_complex
{
    R re{};
    R im{};

    constexpr basic_complex() = default;
    constexpr basic_complex(R r) : re(r), im(0.0) {}
    constexpr basic_complex(R r, R i) : re(r), im(i) {}

    friend basic_complex operator+(const basic_complex& a, const basic_complex& b)
    {
        return {a.re + b.re, a.im + b.im};
    }
    friend basic_complex operator-(const basic_complex& a, const basic_complex& b)
    {
        return {a.re - b.re, a.im - b.im};
    }
    friend basic_complex operator-(const basic_complex& a) { return {-a.re, -a.im}; }
    friend basic_complex operator*(const basic_complex& a, const basic_complex& b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend basic_complex operator*(const basic_complex& a, const R& s)
    {
        return {a.re * s, a.im * s};
    }
    friend basic_complex operator/(const basic_complex& a, const basic_complex& b)
    {
        // Scale by the larger component of b to keep the denominator in range.
        const double scale_d = std::max(std::abs(to_double(b.re)), std::abs(to_double(b.im)));
        const R scale = R(scale_d == 0.0 ? 1.0 : std::exp2(-std::ilogb(scale_d)));
        const basic_complex bs{b.re * scale, b.im * scale};
        const R denom = bs.re * bs.re + bs.im * bs.im;
        const basic_complex num = a * basic_complex{bs.re, -bs.im};
        return {num.re * scale / denom, num.im * scale / denom};
    }
    basic_complex& operator+=(const basic_complex& b) { return *this = *this + b; }
    basic_complex& operator-=(const basic_complex& b) { return *this = *this - b; }
    basic_complex& operator*=(const basic_complex& b) { return *this = *this * b; }
};

template <typename R>
double abs_approx(const basic_complex<R>& z)
{
    return std::hypot(to_double(z.re), to_double(z.im));
}

template <typename R>
std::complex<double> to_std(const basic_complex<R>& z)
{
    return {to_double(z.re), to_double(z.im)};
}

using dd_complex = basic_complex<dd_real>;

} // namespace polynomiogram
