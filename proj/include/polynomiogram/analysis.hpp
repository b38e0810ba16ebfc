#pragma once

// Reference mathematics for the three validation families: Kac ring
// statistics, closed-form Lucas zeros, and the discriminant geometry of
// x^3 + a x^2 + b x - 1.

#include "polynomiogram/error.hpp"
#include "polynomiogram/family.hpp"
#include "polynomiogram/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace polynomiogram::analysis {

inline constexpr double kRealTolerance = 1e-8;

/// Real-root test shared by every check: |Im z| <= scale * (1 + |z|).
inline bool is_real(complex z, double scale = kRealTolerance)
{
    return std::abs(z.imag()) <= scale * (1.0 + std::abs(z));
}

/// Greedy nearest-neighbour pairing: each computed value, in order, takes
/// the closest unused reference. Exact for well separated sets; approximate
/// for large clustered ones. Returns the matched distance per computed value.
inline std::vector<double> match_greedy(std::span<const complex> computed,
                                        std::span<const complex> reference)
{
    if (computed.size() != reference.size())
        throw CardinalityMismatch("cannot match " + std::to_string(computed.size()) +
                                  " values against " + std::to_string(reference.size()));
    std::vector<char> used(reference.size(), 0);
    std::vector<double> dist;
    dist.reserve(computed.size());
    for (const auto& z : computed) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < reference.size(); ++j)
            if (!used[j] && std::abs(z - reference[j]) < best_d) {
                best_d = std::abs(z - reference[j]);
                best = j;
            }
        used[best] = 1;
        dist.push_back(best_d);
    }
    return dist;
}

// ---------------------------------------------------------------------------
// Kac ensemble

struct KacStats
{
    static constexpr int kBins = 64;
    static constexpr double kMaxRadius = 2.0;

    std::array<std::uint64_t, kBins> radial_histogram{};
    double peak_radius = 0.0;
    double annulus_fraction = 0.0;  // |z| in [0.8, 1.2]
    double interior_fraction = 0.0; // |z| < 0.8
    double upper_fraction = 0.0;    // Im z > 0
    double mean_real_roots = 0.0;
    double real_tolerance = kRealTolerance;
    std::uint64_t total_roots = 0;
    std::uint64_t polynomials = 0;
};

inline KacStats kac_stats(std::span<const solver::RootSet> rootsets,
                          double real_tol_scale = kRealTolerance)
{
    if (rootsets.empty())
        throw DomainError("kac_stats needs at least one root set");
    KacStats s;
    s.real_tolerance = real_tol_scale;
    s.polynomials = rootsets.size();
    std::uint64_t annulus = 0, interior = 0, upper = 0, real = 0;
    const double bin_width = KacStats::kMaxRadius / KacStats::kBins;
    for (const auto& rs : rootsets)
        for (const auto& z : rs.roots) {
            ++s.total_roots;
            const double r = std::abs(z);
            if (r <= KacStats::kMaxRadius) {
                const int bin = std::min(static_cast<int>(r / bin_width), KacStats::kBins - 1);
                ++s.radial_histogram[static_cast<std::size_t>(bin)];
            }
            annulus += (r >= 0.8 && r <= 1.2);
            interior += (r < 0.8);
            upper += (z.imag() > 0.0);
            real += is_real(z, real_tol_scale);
        }
    const auto peak = std::max_element(s.radial_histogram.begin(), s.radial_histogram.end());
    s.peak_radius = (static_cast<double>(peak - s.radial_histogram.begin()) + 0.5) * bin_width;
    const double total = static_cast<double>(std::max<std::uint64_t>(s.total_roots, 1));
    s.annulus_fraction = static_cast<double>(annulus) / total;
    s.interior_fraction = static_cast<double>(interior) / total;
    s.upper_fraction = static_cast<double>(upper) / total;
    s.mean_real_roots = static_cast<double>(real) / static_cast<double>(rootsets.size());
    return s;
}

struct Slope
{
    double observed;
    double predicted;
};

/// Growth of the mean real-root count between degrees n1 < n2 against
/// (2/pi) ln(n2/n1); the ensemble constant cancels in the difference.
inline Slope real_root_slope(const KacStats& s1, int n1, const KacStats& s2, int n2)
{
    if (n1 < 2 || n2 < n1)
        throw DomainError("real_root_slope needs 2 <= n1 <= n2");
    return {s2.mean_real_roots - s1.mean_real_roots,
            2.0 / std::numbers::pi * std::log(static_cast<double>(n2) / n1)};
}

// ---------------------------------------------------------------------------
// Lucas polynomials

/// 2i cos((2k+1) pi / (2n)), k = 0..n-1.
inline std::vector<complex> lucas_reference_zeros(int n)
{
    if (n < 1)
        throw DomainError("Lucas zeros need n >= 1");
    std::vector<complex> z;
    z.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double c = std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * n));
        // cos is not exactly odd-symmetric in floating point; pin the pairs.
        if (2 * k + 1 > n) {
            c = -std::cos((2.0 * (n - 1 - k) + 1.0) * std::numbers::pi / (2.0 * n));
        } else if (2 * k + 1 == n) {
            c = 0.0;
        }
        z.emplace_back(0.0, 2.0 * c);
    }
    return z;
}

struct LucasError
{
    double max_distance;
    double max_abs_real;
    double max_abs_imag;
};

inline LucasError lucas_max_error(int n, const solver::RootSet& computed)
{
    if (computed.roots.size() != static_cast<std::size_t>(n))
        throw CardinalityMismatch("expected " + std::to_string(n) + " roots, got " +
                                  std::to_string(computed.roots.size()));
    const auto ref = lucas_reference_zeros(n);
    const auto d = match_greedy(computed.roots, ref);
    LucasError e{0.0, 0.0, 0.0};
    for (double x : d)
        e.max_distance = std::max(e.max_distance, x);
    for (const auto& z : computed.roots) {
        e.max_abs_real = std::max(e.max_abs_real, std::abs(z.real()));
        e.max_abs_imag = std::max(e.max_abs_imag, std::abs(z.imag()));
    }
    return e;
}

// ---------------------------------------------------------------------------
// Cubic family x^3 + a x^2 + b x - 1

inline double cubic_discriminant(double a, double b)
{
    return a * a * b * b - 4.0 * b * b * b + 4.0 * a * a * a - 27.0 - 18.0 * a * b;
}

struct ParameterPoint
{
    double a;
    double b;
};

/// Parameters whose cubic has a double root at x = r.
inline ParameterPoint discriminant_boundary(double r)
{
    if (r == 0.0)
        throw DomainError("discriminant boundary is undefined at r = 0");
    return {-2.0 * r - 1.0 / (r * r), r * r + 2.0 / r};
}

enum class Regime { OneReal, ThreeReal, Boundary };

inline const char* regime_name(Regime r)
{
    switch (r) {
    case Regime::OneReal: return "one-real";
    case Regime::ThreeReal: return "three-real";
    case Regime::Boundary: return "boundary";
    }
    return "?";
}

inline Regime classify_regime(double a, double b, double tol = 1e-9)
{
    const double d = cubic_discriminant(a, b);
    const double scale = 1.0 + std::abs(a * a * a) + std::abs(b * b * b);
    if (std::abs(d) <= tol * scale)
        return Regime::Boundary;
    return d > 0.0 ? Regime::ThreeReal : Regime::OneReal;
}

struct Interval
{
    double lo;
    double hi;
};

/// Whether x can be a real root for some (a, b) in the box: b = (1 - x^3)/x - x a
/// is affine in a, so its range over a_range is spanned by the endpoints.
inline bool real_axis_feasibility(double x, Interval a_range, Interval b_range)
{
    if (x == 0.0)
        throw DomainError("feasibility is undefined at x = 0");
    const double base = (1.0 - x * x * x) / x;
    const double b1 = base - x * a_range.lo;
    const double b2 = base - x * a_range.hi;
    return std::max(b1, b2) >= b_range.lo && std::min(b1, b2) <= b_range.hi;
}

inline std::vector<complex> cubic_roots(double a, double b)
{
    const Polynomial p{complex{-1.0}, complex{b}, complex{a}, complex{1.0}};
    return solver::polish(solver::roots_companion(p), p).roots;
}

inline int count_real(std::span<const complex> roots, double scale = kRealTolerance)
{
    return static_cast<int>(std::count_if(roots.begin(), roots.end(),
                                          [&](complex z) { return is_real(z, scale); }));
}

namespace detail {

template <typename F>
double bisect(F f, double lo, double hi)
{
    double flo = f(lo);
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi)
            break;
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

/// Where the discriminant curve meets b = -3 (P5) and a = 3 (P6). The
/// tabulated coordinates (-1.62, -3) and (3, 1.62) are these points rounded.
inline ParameterPoint boundary_point_p5()
{
    // b(r) = -3  <=>  r^3 + 3r + 2 = 0, unique real root in (-1, 0).
    const double r = detail::bisect([](double t) { return t * t * t + 3.0 * t + 2.0; }, -1.0, 0.0);
    return discriminant_boundary(r);
}

inline ParameterPoint boundary_point_p6()
{
    // a(r) = 3  <=>  2r^3 + 3r^2 + 1 = 0, unique real root in (-2, -1).
    const double r = detail::bisect([](double t) { return 2.0 * t * t * t + 3.0 * t * t + 1.0; },
                                    -2.0, -1.0);
    return discriminant_boundary(r);
}

struct CubicPoint
{
    std::string label;
    double a;
    double b;
    std::vector<complex> roots;
    Regime regime;
};

/// Row of the reference root table: identifier and value to two decimals.
struct TableEntry
{
    std::string id;
    std::string point;
    complex value;
};

inline std::vector<TableEntry> table1_reference()
{
    return {{"P1A", "P1", {-0.42, -0.28}}, {"P1B", "P1", {-0.42, 0.28}}, {"P1C", "P1", {3.85, 0.0}},
            {"P4A", "P4", {-1.63, -1.09}}, {"P4B", "P4", {-1.63, 1.09}}, {"P4C", "P4", {0.26, 0.0}},
            {"P3A", "P3", {-3.73, 0.0}},   {"P3B", "P3", {-0.27, 0.0}},  {"P3C", "P3", {1.00, 0.0}},
            {"P5A", "P5", {-0.60, 0.0}},   {"P5B", "P5", {2.81, 0.0}},   {"P6A", "P6", {-1.68, 0.0}},
            {"P6B", "P6", {0.36, 0.0}}};
}

inline std::vector<CubicPoint> table1_report()
{
    const ParameterPoint p5 = boundary_point_p5();
    const ParameterPoint p6 = boundary_point_p6();
    const std::vector<std::pair<std::string, ParameterPoint>> points{
        {"P1", {-3.0, -3.0}}, {"P2", {-3.0, 3.0}}, {"P3", {3.0, -3.0}},
        {"P4", {3.0, 3.0}},   {"P5", p5},          {"P6", p6}};
    std::vector<CubicPoint> out;
    for (const auto& [label, pt] : points)
        out.push_back({label, pt.a, pt.b, cubic_roots(pt.a, pt.b), classify_regime(pt.a, pt.b)});
    return out;
}

inline double round2(double x) { return std::round(x * 100.0) / 100.0; }

/// True when z rounds to `ref` in both components at two decimals.
inline bool matches_2dp(complex z, complex ref)
{
    return std::abs(round2(z.real()) - ref.real()) < 1e-9 &&
           std::abs(round2(z.imag()) - ref.imag()) < 1e-9;
}

} // namespace polynomiogram::analysis
