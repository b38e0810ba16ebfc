#pragma once

// All-roots solvers: eigenvalues of the balanced Frobenius companion matrix
// by complex single-shift QR, and Aberth-Ehrlich simultaneous iteration in
// double or double-double working precision.

#include "polynomiogram/dd.hpp"
#include "polynomiogram/error.hpp"
#include "polynomiogram/family.hpp"
#include "polynomiogram/qd.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polynomiogram::solver {

enum class Engine { CompanionQR, Aberth };

struct RootSet
{
    std::vector<complex> roots;
    std::vector<double> residuals;
    Engine engine = Engine::CompanionQR;
    int iterations = 0;
};

struct PrecisionConfig
{
    int significand_bits = 53;
    int max_iterations = 200;
    double tolerance_factor = 4.0;
};

inline constexpr int kDefaultDegreeCap = 512;

/// Unit roundoff 2^-bits of the working precision.
inline double unit_roundoff(int significand_bits) { return std::ldexp(1.0, -significand_bits); }

struct Evaluation
{
    complex value;      // p(z), or q(1/z) = p(z)/z^n when |z| > 1
    complex derivative; // matching derivative
    double magnitude_sum; // sum |a_j||z|^j on the same scale as value
    bool reversed;
};

// Horner in double with reversal outside the unit disk, so large |z|
// never overflows.
inline Evaluation evaluate(std::span<const complex> a, complex z)
{
    const std::size_t n = a.size() - 1;
    Evaluation e{};
    if (std::abs(z) <= 1.0) {
        const double r = std::abs(z);
        complex p = a[n], dp{};
        double s = std::abs(a[n]);
        for (std::size_t k = n; k-- > 0;) {
            dp = dp * z + p;
            p = p * z + a[k];
            s = s * r + std::abs(a[k]);
        }
        e = {p, dp, s, false};
    } else {
        const complex y = 1.0 / z;
        const double r = std::abs(y);
        complex q = a[0], dq{};
        double s = std::abs(a[0]);
        for (std::size_t k = 1; k <= n; ++k) {
            dq = dq * y + q;
            q = q * y + a[k];
            s = s * r + std::abs(a[k]);
        }
        e = {q, dq, s, true};
    }
    return e;
}

/// |p(z)| / sum_j |a_j||z|^j; invariant under scaling p by a nonzero constant.
inline double scaled_residual(const Polynomial& p, complex z)
{
    const Evaluation e = evaluate(p.coeffs, z);
    const double num = std::abs(e.value);
    if (e.magnitude_sum == 0.0)
        return num;
    return num / e.magnitude_sum;
}

/// Dense row-major complex matrix.
struct Matrix
{
    std::size_t n = 0;
    std::vector<complex> data;

    explicit Matrix(std::size_t size) : n(size), data(size * size) {}
    complex& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
    const complex& operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

/// Frobenius companion of the monic normalization: ones on the subdiagonal,
/// last column [-b_0, ..., -b_{n-1}].
inline Matrix companion_matrix(const Polynomial& p)
{
    const int n = p.degree();
    if (n < 1)
        throw DegenerateInput("companion matrix needs degree >= 1");
    if (p.leading() == complex{})
        throw DegenerateInput("leading coefficient is zero");
    const auto un = static_cast<std::size_t>(n);
    Matrix m(un);
    for (std::size_t i = 1; i < un; ++i)
        m(i, i - 1) = 1.0;
    for (std::size_t i = 0; i < un; ++i)
        m(i, un - 1) = -p.coeffs[i] / p.leading();
    return m;
}

namespace detail {

inline double norm1(complex z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Diagonal similarity by powers of two until row and column norms balance.
inline void balance(Matrix& h)
{
    constexpr double radix = 2.0;
    constexpr double sqrdx = radix * radix;
    const std::size_t n = h.n;
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i)
                    continue;
                c += norm1(h(j, i));
                r += norm1(h(i, j));
            }
            if (c == 0.0 || r == 0.0)
                continue;
            const double s = c + r;
            double f = 1.0;
            double g = r / radix;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                const double inv = 1.0 / f;
                for (std::size_t j = 0; j < n; ++j)
                    h(i, j) *= inv;
                for (std::size_t j = 0; j < n; ++j)
                    h(j, i) *= f;
            }
        }
    }
}

struct Rotation
{
    double c;
    complex s;
};

// Rotation G = [c s; -conj(s) c] with G [x; y] = [r; 0].
inline Rotation make_rotation(complex x, complex y, complex* r = nullptr)
{
    const double ax = std::abs(x);
    const double ay = std::abs(y);
    if (ay == 0.0) {
        if (r)
            *r = x;
        return {1.0, complex{}};
    }
    if (ax == 0.0) {
        if (r)
            *r = y;
        return {0.0, complex{1.0, 0.0}};
    }
    const double norm = std::hypot(ax, ay);
    const complex phase = x / ax;
    if (r)
        *r = phase * norm;
    return {ax / norm, phase * std::conj(y) / norm};
}

inline void apply_left(Matrix& h, const Rotation& g, std::size_t i, std::size_t j,
                       std::size_t col_begin, std::size_t col_end)
{
    for (std::size_t k = col_begin; k <= col_end; ++k) {
        const complex a = h(i, k), b = h(j, k);
        h(i, k) = g.c * a + g.s * b;
        h(j, k) = -std::conj(g.s) * a + g.c * b;
    }
}

inline void apply_right(Matrix& h, const Rotation& g, std::size_t i, std::size_t j,
                        std::size_t row_begin, std::size_t row_end)
{
    for (std::size_t k = row_begin; k <= row_end; ++k) {
        const complex a = h(k, i), b = h(k, j);
        h(k, i) = g.c * a + std::conj(g.s) * b;
        h(k, j) = -g.s * a + g.c * b;
    }
}

inline bool negligible_subdiagonal(const Matrix& h, std::size_t i)
{
    const double sd = norm1(h(i, i - 1));
    const double scale = norm1(h(i - 1, i - 1)) + norm1(h(i, i));
    return sd <= std::numeric_limits<double>::epsilon() * scale ||
           sd < std::numeric_limits<double>::min();
}

// Wilkinson shift from the trailing 2x2 block of the active window, with
// the classic exceptional shifts after 10 and 30 stalled iterations.
inline complex wilkinson_shift(const Matrix& h, std::size_t iu, int iter)
{
    if ((iter == 10 || iter == 30) && iu >= 2)
        return std::abs(h(iu, iu - 1).real()) + std::abs(h(iu - 1, iu - 2).real());

    complex t00 = h(iu - 1, iu - 1), t01 = h(iu - 1, iu);
    complex t10 = h(iu, iu - 1), t11 = h(iu, iu);
    const double scale = std::sqrt(std::norm(t00) + std::norm(t01) + std::norm(t10) + std::norm(t11));
    if (scale == 0.0)
        return complex{};
    t00 /= scale;
    t01 /= scale;
    t10 /= scale;
    t11 /= scale;
    const complex b = t01 * t10;
    const complex c = t00 - t11;
    const complex disc = std::sqrt(c * c + 4.0 * b);
    const complex det = t00 * t11 - b;
    const complex trace = t00 + t11;
    complex ev1 = (trace + disc) / 2.0;
    complex ev2 = (trace - disc) / 2.0;
    const double n1 = norm1(ev1), n2 = norm1(ev2);
    // The smaller eigenvalue is better recovered from the determinant.
    if (n1 > n2)
        ev2 = det / ev1;
    else if (n2 != 0.0)
        ev1 = det / ev2;
    return scale * (norm1(ev1 - t11) < norm1(ev2 - t11) ? ev1 : ev2);
}

/// Eigenvalues of an upper-Hessenberg matrix; the matrix is destroyed.
inline std::vector<complex> hessenberg_eigenvalues(Matrix& h, int& sweeps)
{
    const std::size_t n = h.n;
    const long max_sweeps = 30L * static_cast<long>(n);
    std::size_t iu = n - 1;
    int iter = 0;
    sweeps = 0;
    for (;;) {
        while (iu > 0 && negligible_subdiagonal(h, iu)) {
            h(iu, iu - 1) = 0.0;
            --iu;
            iter = 0;
        }
        if (iu == 0)
            break;
        ++iter;
        if (++sweeps > max_sweeps)
            throw NoConvergence("QR iteration did not converge within 30n sweeps", iu + 1);

        std::size_t il = iu - 1;
        while (il > 0 && !negligible_subdiagonal(h, il))
            --il;
        if (il > 0)
            h(il, il - 1) = 0.0;

        const complex shift = wilkinson_shift(h, iu, iter);
        Rotation g = make_rotation(h(il, il) - shift, h(il + 1, il));
        apply_left(h, g, il, il + 1, il, iu);
        apply_right(h, g, il, il + 1, il, std::min(il + 2, iu));
        for (std::size_t i = il + 1; i < iu; ++i) {
            complex r;
            g = make_rotation(h(i, i - 1), h(i + 1, i - 1), &r);
            h(i, i - 1) = r;
            h(i + 1, i - 1) = 0.0;
            apply_left(h, g, i, i + 1, i, iu);
            apply_right(h, g, i, i + 1, il, std::min(i + 2, iu));
        }
    }
    std::vector<complex> ev(n);
    for (std::size_t i = 0; i < n; ++i)
        ev[i] = h(i, i);
    return ev;
}

// Number of exact zero roots (vanishing low-order coefficients).
inline std::size_t zero_root_count(const Polynomial& p)
{
    std::size_t m = 0;
    while (m + 1 < p.coeffs.size() && p.coeffs[m] == complex{} &&
           (!p.has_tail() || p.coeffs_lo[m] == complex{}))
        ++m;
    return m;
}

inline Polynomial drop_low(const Polynomial& p, std::size_t m)
{
    Polynomial q(std::vector<complex>(p.coeffs.begin() + static_cast<long>(m), p.coeffs.end()));
    if (p.has_tail())
        q.coeffs_lo.assign(p.coeffs_lo.begin() + static_cast<long>(m), p.coeffs_lo.end());
    return q;
}

inline void check_solvable(const Polynomial& p)
{
    if (p.degree() < 1)
        throw DegenerateInput("polynomial degree must be at least 1");
    if (p.leading() == complex{})
        throw DegenerateInput("leading coefficient is zero");
    for (const auto& a : p.coeffs)
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw DegenerateInput("non-finite coefficient");
}

} // namespace detail

/// Roots as eigenvalues of the balanced companion matrix.
inline RootSet roots_companion(const Polynomial& p, int degree_cap = kDefaultDegreeCap)
{
    detail::check_solvable(p);
    if (p.degree() > degree_cap)
        throw DegreeCapExceeded("degree " + std::to_string(p.degree()) + " exceeds cap " +
                                std::to_string(degree_cap));
    RootSet out;
    out.engine = Engine::CompanionQR;
    const std::size_t zeros = detail::zero_root_count(p);
    out.roots.assign(zeros, complex{});
    const Polynomial q = detail::drop_low(p, zeros);
    if (q.degree() == 1) {
        out.roots.push_back(-q.coeffs[0] / q.coeffs[1]);
    } else if (q.degree() > 1) {
        Matrix h = companion_matrix(q);
        detail::balance(h);
        int sweeps = 0;
        auto ev = detail::hessenberg_eigenvalues(h, sweeps);
        out.iterations = sweeps;
        out.roots.insert(out.roots.end(), ev.begin(), ev.end());
    }
    out.residuals.reserve(out.roots.size());
    for (const auto& z : out.roots)
        out.residuals.push_back(scaled_residual(p, z));
    return out;
}

/// Up to three Newton steps per root; a step is kept only when it lowers
/// both |p(z)| and the scaled residual.
inline RootSet polish(RootSet rs, const Polynomial& p)
{
    const std::span<const complex> a = p.coeffs;
    const int n = p.degree();
    for (std::size_t k = 0; k < rs.roots.size(); ++k) {
        complex z = rs.roots[k];
        Evaluation e = evaluate(a, z);
        double res = e.magnitude_sum == 0.0 ? std::abs(e.value) : std::abs(e.value) / e.magnitude_sum;
        double abs_p = e.reversed ? std::abs(e.value) * std::pow(std::abs(z), n) : std::abs(e.value);
        for (int step = 0; step < 3 && res > 0.0; ++step) {
            complex delta;
            if (!e.reversed) {
                if (e.derivative == complex{})
                    break;
                delta = e.value / e.derivative;
            } else {
                // p/p' = z q / (n q - y q') with y = 1/z.
                const complex denom = static_cast<double>(n) * e.value - e.derivative / z;
                if (denom == complex{})
                    break;
                delta = z * e.value / denom;
            }
            const complex trial = z - delta;
            if (!std::isfinite(trial.real()) || !std::isfinite(trial.imag()))
                break;
            const Evaluation et = evaluate(a, trial);
            const double rt = et.magnitude_sum == 0.0 ? std::abs(et.value)
                                                      : std::abs(et.value) / et.magnitude_sum;
            const double pt = et.reversed ? std::abs(et.value) * std::pow(std::abs(trial), n)
                                          : std::abs(et.value);
            if (!(rt < res) || !(pt < abs_p))
                break;
            z = trial;
            e = et;
            res = rt;
            abs_p = pt;
        }
        rs.roots[k] = z;
        if (k < rs.residuals.size())
            rs.residuals[k] = std::min(rs.residuals[k], res);
        else
            rs.residuals.push_back(res);
    }
    return rs;
}

namespace detail {

template <typename R>
using cx = basic_complex<R>;

// Iterates live in the working type R; p and p' are evaluated one precision
// level higher so the freeze test sees the true residual, not Horner noise,
// and the Newton ratio stays meaningful when sum |a_j||z|^j dwarfs |p'|.
template <typename R>
struct Extended;

template <>
struct Extended<double>
{
    using type = dd_real;
    static double narrow(const dd_real& v) { return to_double(v); }
};

template <>
struct Extended<dd_real>
{
    using type = qd_real;
    static dd_real narrow(const qd_real& v) { return to_dd(v); }
};

template <typename R>
struct AberthEval
{
    cx<R> value;
    cx<R> derivative;
    double magnitude_sum;
    bool reversed;
};

template <typename R>
AberthEval<R> aberth_evaluate(const std::vector<cx<R>>& a,
                              const std::vector<cx<typename Extended<R>::type>>& wide,
                              const std::vector<double>& mag, const cx<R>& z)
{
    using E = typename Extended<R>::type;
    const auto narrow = [](const cx<E>& v) {
        return cx<R>(Extended<R>::narrow(v.re), Extended<R>::narrow(v.im));
    };
    const std::size_t n = a.size() - 1;
    const double az = abs_approx(z);
    if (az <= 1.0) {
        const cx<E> zw(E(z.re), E(z.im));
        cx<E> p = wide[n];
        cx<E> dp{};
        double s = mag[n];
        for (std::size_t k = n; k-- > 0;) {
            dp = dp * zw + p;
            p = p * zw + wide[k];
            s = s * az + mag[k];
        }
        return {narrow(p), narrow(dp), s, false};
    }
    const cx<R> y = cx<R>(R(1.0)) / z;
    const cx<E> yw(E(y.re), E(y.im));
    const double ay = 1.0 / az;
    cx<E> q = wide[0];
    cx<E> dq{};
    double s = mag[0];
    for (std::size_t k = 1; k <= n; ++k) {
        dq = dq * yw + q;
        q = q * yw + wide[k];
        s = s * ay + mag[k];
    }
    return {narrow(q), narrow(dq), s, true};
}

template <typename R>
struct Coefficients
{
    using E = typename Extended<R>::type;
    std::vector<cx<R>> a;
    std::vector<cx<E>> wide;
    std::vector<double> mag;

    explicit Coefficients(const Polynomial& q)
    {
        const std::size_t n = q.coeffs.size() - 1;
        a.resize(n + 1);
        wide.resize(n + 1);
        mag.resize(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            const complex hi = q.coeffs[k];
            const complex lo = q.has_tail() ? q.coeffs_lo[k] : complex{};
            wide[k] = {E(hi.real()) + E(lo.real()), E(hi.imag()) + E(lo.imag())};
            if constexpr (std::is_same_v<R, double>)
                a[k] = {hi.real(), hi.imag()};
            else
                a[k] = {R(hi.real()) + R(lo.real()), R(hi.imag()) + R(lo.imag())};
            mag[k] = abs_approx(wide[k]);
        }
    }
};

// Aberth correction for root k; nullopt when the derivative term vanishes.
template <typename R>
std::optional<cx<R>> aberth_step(const AberthEval<R>& e, const std::vector<cx<R>>& z,
                                 std::size_t k)
{
    const std::size_t n = z.size();
    // Newton ratio w = p/p'; outside the unit disk p/p' = z q / (n q - y q').
    cx<R> denom;
    cx<R> numer;
    if (!e.reversed) {
        numer = e.value;
        denom = e.derivative;
    } else {
        const cx<R> y = cx<R>(R(1.0)) / z[k];
        numer = z[k] * e.value;
        denom = e.value * R(static_cast<double>(n)) - y * e.derivative;
    }
    if (abs_approx(denom) == 0.0)
        return std::nullopt;
    const cx<R> w = numer / denom;
    cx<R> sum{};
    for (std::size_t j = 0; j < n; ++j) {
        if (j == k)
            continue;
        const cx<R> diff = z[k] - z[j];
        if (abs_approx(diff) == 0.0)
            continue;
        sum += cx<R>(R(1.0)) / diff;
    }
    const cx<R> coupling = cx<R>(R(1.0)) - w * sum;
    return abs_approx(coupling) == 0.0 ? w : w / coupling;
}

// Upper convex hull of (k, log|a_k|): each edge from i to j carries j - i
// starting points on a circle of radius (|a_i|/|a_j|)^(1/(j-i)).
inline std::vector<complex> newton_polygon_guesses(const std::vector<double>& mag)
{
    const int n = static_cast<int>(mag.size()) - 1;
    std::vector<int> hull;
    for (int k = 0; k <= n; ++k) {
        if (mag[static_cast<std::size_t>(k)] == 0.0)
            continue;
        const double yk = std::log(mag[static_cast<std::size_t>(k)]);
        while (hull.size() >= 2) {
            const int i = hull[hull.size() - 2], j = hull.back();
            const double yi = std::log(mag[static_cast<std::size_t>(i)]);
            const double yj = std::log(mag[static_cast<std::size_t>(j)]);
            // Drop j when it lies on or below the chord from i to k.
            if ((yj - yi) * (k - i) <= (yk - yi) * (j - i))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(k);
    }
    std::vector<complex> guesses;
    guesses.reserve(static_cast<std::size_t>(n));
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
        const int i = hull[e], j = hull[e + 1];
        const int m = j - i;
        const double radius = std::exp((std::log(mag[static_cast<std::size_t>(i)]) -
                                        std::log(mag[static_cast<std::size_t>(j)])) / m);
        for (int t = 0; t < m; ++t) {
            const double angle = two_pi * (t + 0.25) / m + 0.5 / m + 0.7 * static_cast<double>(e);
            guesses.push_back(std::polar(radius, angle));
        }
    }
    return guesses;
}

template <typename R>
RootSet aberth_impl(const Polynomial& p, const PrecisionConfig& cfg)
{
    const std::size_t zeros = zero_root_count(p);
    const Polynomial q = drop_low(p, zeros);
    const std::size_t n = static_cast<std::size_t>(q.degree());

    RootSet out;
    out.engine = Engine::Aberth;
    out.roots.assign(zeros, complex{});
    out.residuals.assign(zeros, 0.0);
    if (n == 0)
        return out;

    const Coefficients<R> c(q);
    const auto& a = c.a;
    const auto& wide = c.wide;
    const auto& mag = c.mag;

    const double u = unit_roundoff(cfg.significand_bits);
    const double threshold = cfg.tolerance_factor * u;

    std::vector<cx<R>> z(n);
    {
        const auto init = newton_polygon_guesses(mag);
        for (std::size_t k = 0; k < n; ++k)
            z[k] = {R(init[k].real()), R(init[k].imag())};
    }
    std::vector<char> frozen(n, 0);
    std::vector<double> residual(n, 0.0);
    std::vector<int> restarts(n, 0);
    std::size_t active = n;
    int it = 0;

    for (; it < cfg.max_iterations && active > 0; ++it) {
        for (std::size_t k = 0; k < n; ++k) {
            if (frozen[k])
                continue;
            const AberthEval<R> e = aberth_evaluate(a, wide, mag, z[k]);
            const double num = abs_approx(e.value);
            const double res = e.magnitude_sum == 0.0 ? num : num / e.magnitude_sum;
            if (res <= threshold) {
                frozen[k] = 1;
                residual[k] = res;
                --active;
                continue;
            }
            const auto step_opt = aberth_step(e, z, k);
            if (!step_opt) {
                if (++restarts[k] > 3)
                    throw DerivativeBreakdown("derivative vanished at an iterate after 3 restarts");
                const double kick = 1e-3 * (1.0 + abs_approx(z[k]));
                z[k] = z[k] + cx<R>(R(kick * std::cos(restarts[k] + 0.3)),
                                    R(kick * std::sin(restarts[k] + 0.3)));
                continue;
            }
            const cx<R> step = *step_opt;
            z[k] -= step;
            // A step of a few ulps means z already sits at the representable
            // point nearest the root.
            if (abs_approx(step) <= threshold * abs_approx(z[k])) {
                const AberthEval<R> f = aberth_evaluate(a, wide, mag, z[k]);
                const double fn = abs_approx(f.value);
                frozen[k] = 1;
                residual[k] = f.magnitude_sum == 0.0 ? fn : fn / f.magnitude_sum;
                --active;
            }
        }
    }

    if (active > 0)
        throw NoConvergence("Aberth iteration left " + std::to_string(active) +
                                " of " + std::to_string(n) + " roots unconverged",
                            active);

    out.iterations = it;
    for (std::size_t k = 0; k < n; ++k) {
        out.roots.push_back(to_std(z[k]));
        out.residuals.push_back(residual[k]);
    }
    return out;
}

} // namespace detail

/// Aberth-Ehrlich iteration at 53-bit (double) or 106-bit (double-double)
/// working precision. Converged roots freeze but stay in the coupling sum.
inline RootSet roots_aberth(const Polynomial& p, const PrecisionConfig& cfg = {})
{
    detail::check_solvable(p);
    if (cfg.max_iterations < 1 || !(cfg.tolerance_factor > 0.0))
        throw DomainError("max_iterations and tolerance_factor must be positive");
    switch (cfg.significand_bits) {
    case 53: return detail::aberth_impl<double>(p, cfg);
    case 106: return detail::aberth_impl<dd_real>(p, cfg);
    default:
        throw DomainError("unsupported significand_bits " + std::to_string(cfg.significand_bits) +
                          " (supported: 53, 106)");
    }
}

namespace detail {

template <typename R>
RootSet refine_impl(RootSet rs, const Polynomial& p, const PrecisionConfig& cfg, int max_steps)
{
    const std::size_t zeros = zero_root_count(p);
    const Polynomial q = drop_low(p, zeros);
    const std::size_t n = static_cast<std::size_t>(q.degree());
    if (n == 0)
        return rs;
    const Coefficients<R> c(q);
    const double u = unit_roundoff(cfg.significand_bits);

    // Exact zeros split off by the solvers come first; keep them in place.
    std::vector<std::size_t> live;
    std::vector<cx<R>> z;
    std::size_t skipped = 0;
    for (std::size_t k = 0; k < rs.roots.size(); ++k) {
        if (rs.roots[k] == complex{} && skipped < zeros) {
            ++skipped;
            continue;
        }
        live.push_back(k);
        z.push_back({R(rs.roots[k].real()), R(rs.roots[k].imag())});
    }
    if (z.size() != n)
        throw CardinalityMismatch("refine: root count does not match the degree");

    auto residual_of = [&](const AberthEval<R>& e) {
        const double num = abs_approx(e.value);
        return e.magnitude_sum == 0.0 ? num : num / e.magnitude_sum;
    };
    std::vector<double> res(n);
    std::vector<char> done(n, 0);
    for (std::size_t k = 0; k < n; ++k)
        res[k] = residual_of(aberth_evaluate(c.a, c.wide, c.mag, z[k]));
    std::size_t active = n;
    for (int sweep = 0; sweep < max_steps && active > 0; ++sweep) {
        for (std::size_t k = 0; k < n; ++k) {
            if (done[k])
                continue;
            const AberthEval<R> e = aberth_evaluate(c.a, c.wide, c.mag, z[k]);
            const auto d = res[k] > 0.0 ? aberth_step(e, z, k) : std::nullopt;
            bool stop = !d;
            if (d) {
                const cx<R> trial = z[k] - *d;
                const double rt = residual_of(aberth_evaluate(c.a, c.wide, c.mag, trial));
                z[k] = trial;
                res[k] = rt;
                stop = rt == 0.0 || abs_approx(*d) <= 2.0 * u * abs_approx(trial);
            }
            if (stop) {
                done[k] = 1;
                --active;
            }
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        rs.roots[live[k]] = to_std(z[k]);
        if (live[k] < rs.residuals.size())
            rs.residuals[live[k]] = std::min(rs.residuals[live[k]], res[k]);
    }
    return rs;
}

} // namespace detail

/// Extra Gauss-Seidel Aberth sweeps on a finished root set, with p evaluated one
/// precision level above the working precision and the residual test
/// dropped: a root stops once a step fails to lower its extended residual
/// or shrinks to a couple of ulps.
/// Lifts roots that froze early on a loose residual bound to full working
/// accuracy.
inline RootSet refine(RootSet rs, const Polynomial& p, const PrecisionConfig& cfg = {},
                      int max_sweeps = 100)
{
    detail::check_solvable(p);
    switch (cfg.significand_bits) {
    case 53: return detail::refine_impl<double>(std::move(rs), p, cfg, max_sweeps);
    case 106: return detail::refine_impl<dd_real>(std::move(rs), p, cfg, max_sweeps);
    default:
        throw DomainError("unsupported significand_bits " + std::to_string(cfg.significand_bits) +
                          " (supported: 53, 106)");
    }
}

} // namespace polynomiogram::solver
