#pragma once

// Binned root density: percentile bounds with a symmetric margin and square
// aspect, integer histogram accumulation, merging, and normalization.
//
// Text dump (POLYGRID version 1):
//
//   POLYGRID 1 <width> <height> <re_min> <re_max> <im_min> <im_max> <total_in> <total_dropped>
//   <height lines of <width> space-separated counts>
//
// Row r of the dump holds imaginary bin r counted from im_min; reals are
// printed with 17 significant digits.

#include "polynomiogram/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace polynomiogram::density {

using complex = std::complex<double>;

struct Bounds
{
    double re_min = 0.0, re_max = 1.0, im_min = 0.0, im_max = 1.0;

    double re_span() const { return re_max - re_min; }
    double im_span() const { return im_max - im_min; }

    friend bool operator==(const Bounds&, const Bounds&) = default;
};

struct BoundsResult
{
    Bounds bounds;
    bool degenerate = false; // an axis had zero span and was widened by 1.0
};

/// Percentile with linear interpolation between adjacent order statistics.
/// `sorted` must be ascending and non-empty; q in [0, 1].
inline double percentile(std::span<const double> sorted, double q)
{
    const double h = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size())
        return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

namespace detail {

// Snaps both axes onto a shared power-of-two grid so that the spans are
// exactly equal in floating point, not just up to rounding.
inline Bounds square_up(double x0, double x1, double y0, double y1)
{
    const double span = std::max(x1 - x0, y1 - y0);
    const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
    x0 = cx - 0.5 * span;
    y0 = cy - 0.5 * span;
    const double magnitude = std::max({std::abs(x0), std::abs(y0), std::abs(cx) + span,
                                       std::abs(cy) + span, span});
    const double quantum = std::ldexp(1.0, std::ilogb(magnitude) - 48);
    const double q_span = std::ceil(span / quantum) * quantum;
    const double q_x0 = std::floor(x0 / quantum) * quantum;
    const double q_y0 = std::floor(y0 / quantum) * quantum;
    return {q_x0, q_x0 + q_span, q_y0, q_y0 + q_span};
}

} // namespace detail

/// Per-axis 2.5th/97.5th percentiles, widened by margin_fraction of the span
/// on each side, then squared about the center of the shorter axis.
inline BoundsResult compute_bounds(std::span<const complex> points, double margin_fraction = 0.05)
{
    std::vector<double> re, im;
    re.reserve(points.size());
    im.reserve(points.size());
    for (const auto& z : points)
        if (std::isfinite(z.real()) && std::isfinite(z.imag())) {
            re.push_back(z.real());
            im.push_back(z.imag());
        }
    if (re.empty())
        throw DegenerateInput("no finite points to bound");
    std::sort(re.begin(), re.end());
    std::sort(im.begin(), im.end());

    BoundsResult out;
    auto axis = [&](const std::vector<double>& v, double& lo, double& hi) {
        lo = percentile(v, 0.025);
        hi = percentile(v, 0.975);
        if (!(hi > lo)) {
            lo -= 1.0;
            hi += 1.0;
            out.degenerate = true;
        }
        const double m = margin_fraction * (hi - lo);
        lo -= m;
        hi += m;
    };
    double x0, x1, y0, y1;
    axis(re, x0, x1);
    axis(im, y0, y1);
    out.bounds = detail::square_up(x0, x1, y0, y1);
    return out;
}

struct DensityGrid
{
    int width = 0;
    int height = 0;
    Bounds bounds;
    std::vector<std::uint64_t> counts; // row-major, row = imaginary bin
    std::uint64_t total_in = 0;
    std::uint64_t total_dropped = 0;

    DensityGrid() = default;
    DensityGrid(int w, int h, Bounds b) : width(w), height(h), bounds(b)
    {
        if (w < 1 || h < 1)
            throw DomainError("grid dimensions must be positive");
        if (!(b.re_max > b.re_min) || !(b.im_max > b.im_min))
            throw DomainError("grid bounds must have positive extent");
        counts.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
    }

    std::uint64_t at(int x, int y) const
    {
        return counts[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(x)];
    }
};

/// Bins finite in-bounds points; points on the max edge land in the last bin.
inline void accumulate(DensityGrid& grid, std::span<const complex> points)
{
    const Bounds& b = grid.bounds;
    const double dx = b.re_span() / grid.width;
    const double dy = b.im_span() / grid.height;
    for (const auto& z : points) {
        const double x = z.real(), y = z.imag();
        if (!(x >= b.re_min && x <= b.re_max && y >= b.im_min && y <= b.im_max)) {
            ++grid.total_dropped; // NaN fails every comparison
            continue;
        }
        const int ix = std::clamp(static_cast<int>(std::floor((x - b.re_min) / dx)), 0, grid.width - 1);
        const int iy = std::clamp(static_cast<int>(std::floor((y - b.im_min) / dy)), 0, grid.height - 1);
        ++grid.counts[static_cast<std::size_t>(iy) * static_cast<std::size_t>(grid.width) +
                      static_cast<std::size_t>(ix)];
        ++grid.total_in;
    }
}

inline DensityGrid merge(const DensityGrid& a, const DensityGrid& b)
{
    if (a.width != b.width || a.height != b.height || !(a.bounds == b.bounds))
        throw GeometryMismatch("cannot merge grids with different geometry");
    DensityGrid out = a;
    for (std::size_t i = 0; i < out.counts.size(); ++i)
        out.counts[i] += b.counts[i];
    out.total_in += b.total_in;
    out.total_dropped += b.total_dropped;
    return out;
}

/// ln(1+c) (or c) divided by its maximum; an all-zero grid stays zero.
inline std::vector<double> normalize(const DensityGrid& grid, bool log_scale = true)
{
    std::vector<double> field(grid.counts.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double c = static_cast<double>(grid.counts[i]);
        field[i] = log_scale ? std::log1p(c) : c;
        peak = std::max(peak, field[i]);
    }
    if (peak > 0.0)
        for (auto& v : field)
            v /= peak;
    return field;
}

inline std::string dump(const DensityGrid& g)
{
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "POLYGRID 1 %d %d %.17g %.17g %.17g %.17g %llu %llu\n",
                  g.width, g.height, g.bounds.re_min, g.bounds.re_max, g.bounds.im_min,
                  g.bounds.im_max, static_cast<unsigned long long>(g.total_in),
                  static_cast<unsigned long long>(g.total_dropped));
    out += buf;
    for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            if (x)
                out += ' ';
            out += std::to_string(g.at(x, y));
        }
        out += '\n';
    }
    return out;
}

inline DensityGrid parse_dump(const std::string& text)
{
    std::istringstream in(text);
    std::string magic;
    int version = 0, w = 0, h = 0;
    Bounds b;
    std::uint64_t total_in = 0, dropped = 0;
    if (!(in >> magic >> version >> w >> h >> b.re_min >> b.re_max >> b.im_min >> b.im_max >>
          total_in >> dropped) ||
        magic != "POLYGRID" || version != 1)
        throw DomainError("malformed POLYGRID header");
    DensityGrid g(w, h, b);
    for (auto& c : g.counts)
        if (!(in >> c))
            throw DomainError("truncated POLYGRID body");
    g.total_in = total_in;
    g.total_dropped = dropped;
    return g;
}

} // namespace polynomiogram::density
