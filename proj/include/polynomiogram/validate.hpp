#pragma once

// Validation suites behind `polynomiogram validate`: each produces a list of
// metrics with explicit bounds, reported as key=value lines or JSON.

#include "polynomiogram/analysis.hpp"
#include "polynomiogram/family.hpp"
#include "polynomiogram/pipeline.hpp"
#include "polynomiogram/sampling.hpp"
#include "polynomiogram/solver.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace polynomiogram::validate {

struct Metric
{
    std::string name;
    double value;
    std::optional<double> lower; // inclusive
    std::optional<double> upper; // strict when `strict_upper`
    bool strict_upper = false;

    bool pass() const
    {
        if (!std::isfinite(value))
            return false;
        if (lower && !(value >= *lower))
            return false;
        if (upper && !(strict_upper ? value < *upper : value <= *upper))
            return false;
        return true;
    }
};

struct Report
{
    std::string suite;
    std::vector<Metric> metrics;

    bool pass() const
    {
        for (const auto& m : metrics)
            if (!m.pass())
                return false;
        return !metrics.empty();
    }
};

inline Metric at_least(std::string name, double v, double lo) { return {std::move(name), v, lo, {}}; }
inline Metric at_most(std::string name, double v, double hi) { return {std::move(name), v, {}, hi}; }
inline Metric below(std::string name, double v, double hi) { return {std::move(name), v, {}, hi, true}; }
inline Metric within(std::string name, double v, double lo, double hi) { return {std::move(name), v, lo, hi}; }

// ---------------------------------------------------------------------------
// Kac

struct KacOptions
{
    int degree = 50;
    std::uint64_t samples = 10000;
    std::uint64_t seed = 1;
    int slope_base_degree = 10;
    int workers = 0;
};

/// Root sets for `samples` Kac polynomials (companion QR + polish).
inline std::vector<solver::RootSet> kac_rootsets(int degree, std::uint64_t samples,
                                                 std::uint64_t seed, int workers = 0)
{
    const family::FamilySpec spec = family::KacFamily{degree, seed};
    std::vector<solver::RootSet> out(samples);
    pipeline::detail::parallel_chunks(pipeline::resolve_workers(workers), 0, samples,
                                      [&](int, std::uint64_t b, std::uint64_t e) {
                                          for (std::uint64_t i = b; i < e; ++i) {
                                              const auto p = family::instantiate(spec, {}, {}, i);
                                              out[i] = solver::polish(solver::roots_companion(*p), *p);
                                          }
                                      });
    return out;
}

inline Report kac_suite(const KacOptions& opt)
{
    Report r{"kac", {}};
    const auto sets = kac_rootsets(opt.degree, opt.samples, opt.seed, opt.workers);
    const auto s = analysis::kac_stats(sets);
    r.metrics.push_back(within("kac.peak_radius", s.peak_radius, 0.95, 1.05));
    r.metrics.push_back(at_least("kac.annulus_fraction", s.annulus_fraction, 0.90));
    r.metrics.push_back(at_most("kac.interior_fraction", s.interior_fraction, 0.05));
    if (opt.degree > opt.slope_base_degree) {
        const auto base = kac_rootsets(opt.slope_base_degree, opt.samples, opt.seed, opt.workers);
        const auto sb = analysis::kac_stats(base);
        const auto slope = analysis::real_root_slope(sb, opt.slope_base_degree, s, opt.degree);
        r.metrics.push_back(within("kac.real_root_slope", slope.observed, slope.predicted - 0.35,
                                   slope.predicted + 0.35));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Lucas

struct LucasCase
{
    int n;
    int bits;
};

inline double lucas_tolerance(int bits) { return bits >= 106 ? 1e-12 : 1e-6; }

/// Aberth at the requested precision followed by refinement sweeps.
inline solver::RootSet lucas_roots(int n, int bits)
{
    const Polynomial p = family::lucas_polynomial(n);
    solver::PrecisionConfig cfg;
    cfg.significand_bits = bits;
    return solver::refine(solver::roots_aberth(p, cfg), p, cfg);
}

inline Report lucas_suite(const std::vector<LucasCase>& cases)
{
    Report r{"lucas", {}};
    for (const auto& c : cases) {
        const std::string tag = "lucas.n" + std::to_string(c.n) + "_b" + std::to_string(c.bits);
        const double tol = lucas_tolerance(c.bits);
        const auto e = analysis::lucas_max_error(c.n, lucas_roots(c.n, c.bits));
        r.metrics.push_back(below(tag + ".max_distance", e.max_distance, tol));
        r.metrics.push_back(below(tag + ".max_abs_real", e.max_abs_real, tol));
        r.metrics.push_back(at_most(tag + ".max_abs_imag", e.max_abs_imag, 2.0 + 1e-6));
    }
    return r;
}

inline std::vector<LucasCase> default_lucas_cases() { return {{64, 53}, {128, 106}}; }

// ---------------------------------------------------------------------------
// Cubic

/// Table values matched to computed roots at P1, P3..P6 (two decimals).
inline std::vector<Metric> table1_metrics()
{
    std::vector<Metric> out;
    const auto points = analysis::table1_report();
    const auto table = analysis::table1_reference();
    for (const auto& pt : points) {
        std::vector<complex> refs;
        std::vector<std::string> ids;
        for (const auto& t : table)
            if (t.point == pt.label) {
                refs.push_back(t.value);
                ids.push_back(t.id);
            }
        if (refs.empty())
            continue;
        // Each table value takes its nearest computed root.
        std::vector<char> used(pt.roots.size(), 0);
        for (std::size_t k = 0; k < refs.size(); ++k) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < pt.roots.size(); ++j)
                if (!used[j] && std::abs(pt.roots[j] - refs[k]) < best_d) {
                    best_d = std::abs(pt.roots[j] - refs[k]);
                    best = j;
                }
            used[best] = 1;
            const bool ok = analysis::matches_2dp(pt.roots[best], refs[k]);
            // 0 when the computed root rounds to the table entry.
            out.push_back(at_most("cubic.table." + ids[k], ok ? 0.0 : best_d, 0.0));
        }
    }
    return out;
}

inline double cusp_cluster_radius()
{
    double r = 0.0;
    for (const auto& z : analysis::cubic_roots(-3.0, 3.0))
        r = std::max(r, std::abs(z - complex{1.0, 0.0}));
    return r;
}

/// Share of non-boundary points of a 101 x 101 grid over [-3,3]^2 where the
/// discriminant sign and the solver's real-root count agree.
inline double regime_consistency(int steps = 101)
{
    std::uint64_t agree = 0, total = 0;
    for (int i = 0; i < steps; ++i)
        for (int j = 0; j < steps; ++j) {
            const double a = -3.0 + 6.0 * i / (steps - 1);
            const double b = -3.0 + 6.0 * j / (steps - 1);
            const auto regime = analysis::classify_regime(a, b);
            if (regime == analysis::Regime::Boundary)
                continue;
            ++total;
            const int expected = regime == analysis::Regime::ThreeReal ? 3 : 1;
            agree += analysis::count_real(analysis::cubic_roots(a, b)) == expected;
        }
    return total ? static_cast<double>(agree) / static_cast<double>(total) : 0.0;
}

/// Largest relative discriminant on the parametrised boundary for r drawn
/// uniformly from [-3, -0.2] U [0.2, 3].
inline double boundary_discriminant_error(int samples = 1000, std::uint64_t seed = 7)
{
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double u = sampling::to_unit(sampling::uniform64(seed, 0, static_cast<std::uint64_t>(k)));
        const double m = 0.2 + 2.8 * std::abs(2.0 * u - 1.0);
        const double r = u < 0.5 ? -m : m;
        const auto [a, b] = analysis::discriminant_boundary(r);
        const double scale = std::abs(a * a * b * b) + 4.0 * std::abs(b * b * b) +
                             4.0 * std::abs(a * a * a) + 27.0 + 18.0 * std::abs(a * b);
        worst = std::max(worst, std::abs(analysis::cubic_discriminant(a, b)) / scale);
    }
    return worst;
}

struct GapCheck
{
    int infeasible_inside = 0; // of `inside_samples` points in (-0.25, 0.24)
    int inside_samples = 0;
    int feasible_outside = 0;  // of the four probe points
};

inline GapCheck real_axis_gap(int inside_samples = 50)
{
    const analysis::Interval box{-3.0, 3.0};
    GapCheck g;
    g.inside_samples = inside_samples;
    for (int k = 0; k < inside_samples; ++k) {
        // Midpoints of an even partition of (-0.25, 0.24); skip x = 0 itself.
        double x = -0.25 + 0.49 * (k + 0.5) / inside_samples;
        if (x == 0.0)
            x = 1e-3;
        g.infeasible_inside += !analysis::real_axis_feasibility(x, box, box);
    }
    for (double x : {-0.30, 0.30, 1.0, 3.8})
        g.feasible_outside += analysis::real_axis_feasibility(x, box, box);
    return g;
}

inline Report cubic_suite()
{
    Report r{"cubic", table1_metrics()};
    r.metrics.push_back(below("cubic.cusp_cluster_radius", cusp_cluster_radius(), 1e-4));
    r.metrics.push_back(at_least("cubic.regime_consistency", regime_consistency(), 1.0));
    r.metrics.push_back(at_most("cubic.boundary_discriminant", boundary_discriminant_error(), 1e-8));
    const GapCheck g = real_axis_gap();
    r.metrics.push_back(at_least("cubic.gap_infeasible", g.infeasible_inside, g.inside_samples));
    r.metrics.push_back(at_least("cubic.outside_feasible", g.feasible_outside, 4));
    return r;
}

// ---------------------------------------------------------------------------
// Reporting

inline std::string format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

/// One `name=value lower=.. upper=.. pass=..` line per metric, then the verdict.
inline std::string to_text(const Report& r)
{
    std::string out;
    for (const auto& m : r.metrics) {
        out += m.name + "=" + format_number(m.value);
        if (m.lower)
            out += " lower=" + format_number(*m.lower);
        if (m.upper)
            out += std::string(m.strict_upper ? " below=" : " upper=") + format_number(*m.upper);
        out += std::string(" pass=") + (m.pass() ? "true" : "false") + "\n";
    }
    out += r.suite + ".pass=" + (r.pass() ? "true" : "false") + "\n";
    return out;
}

inline nlohmann::json to_json(const Report& r)
{
    nlohmann::json metrics = nlohmann::json::array();
    for (const auto& m : r.metrics) {
        nlohmann::json j{{"name", m.name}, {"value", m.value}, {"pass", m.pass()}};
        j["lower"] = m.lower ? nlohmann::json(*m.lower) : nlohmann::json(nullptr);
        j["upper"] = m.upper ? nlohmann::json(*m.upper) : nlohmann::json(nullptr);
        j["strict_upper"] = m.strict_upper;
        metrics.push_back(std::move(j));
    }
    return {{"suite", r.suite}, {"pass", r.pass()}, {"metrics", std::move(metrics)}};
}

} // namespace polynomiogram::validate
