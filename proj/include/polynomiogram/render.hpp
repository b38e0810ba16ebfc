#pragma once

#include "polynomiogram/density.hpp"
#include "polynomiogram/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace polynomiogram::render {

enum class Mode { PurePixel, SmoothGlow, SmokyBloom };

struct ControlPoint
{
    double position;
    std::array<std::uint8_t, 3> rgb;
};

using Palette = std::vector<ControlPoint>;

inline Palette ember_palette()
{
    return {{0.0, {0, 0, 0}},
            {0.25, {60, 8, 110}},
            {0.55, {200, 50, 40}},
            {0.8, {250, 170, 30}},
            {1.0, {255, 255, 230}}};
}

inline Palette ocean_palette()
{
    return {{0.0, {2, 4, 20}}, {0.4, {10, 60, 130}}, {0.75, {60, 180, 200}}, {1.0, {235, 250, 255}}};
}

inline Palette palette_by_name(std::string_view name)
{
    if (name == "ember")
        return ember_palette();
    if (name == "ocean")
        return ocean_palette();
    throw DomainError("unknown palette '" + std::string(name) + "'");
}

inline void validate_palette(const Palette& p)
{
    if (p.size() < 2)
        throw DomainError("palette needs at least two control points");
    if (p.front().position != 0.0 || p.back().position != 1.0)
        throw DomainError("palette must start at 0 and end at 1");
    for (std::size_t i = 1; i < p.size(); ++i)
        if (!(p[i].position > p[i - 1].position))
            throw DomainError("palette positions must be strictly increasing");
}

struct RenderSpec
{
    Mode mode = Mode::SmoothGlow;
    Palette palette = ember_palette();
    double gamma = 0.8;
    double floor = 0.02;
    double glow_sigma = 1.5;
    double glow_weight = 0.6;
    std::array<double, 3> bloom_weights{0.5, 0.25, 0.125};
    bool log_scale = true;
};

/// RGBA8, row-major, top row first.
struct Image
{
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    std::array<std::uint8_t, 4> at(int x, int y) const
    {
        const std::size_t i = 4 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                                   static_cast<std::size_t>(x));
        return {pixels[i], pixels[i + 1], pixels[i + 2], pixels[i + 3]};
    }
};

/// A width x height scalar field, row-major.
struct Field
{
    int width = 0;
    int height = 0;
    std::vector<double> values;
};

inline std::vector<double> tone_map(std::vector<double> field, double gamma, double floor)
{
    for (auto& v : field)
        v = v < floor ? 0.0 : std::pow((v - floor) / (1.0 - floor), gamma);
    return field;
}

inline std::array<std::uint8_t, 3> palette_color(const Palette& palette, double v)
{
    if (!(v > 0.0))
        return palette.front().rgb;
    if (v >= 1.0)
        return palette.back().rgb;
    std::size_t hi = 1;
    while (hi + 1 < palette.size() && palette[hi].position < v)
        ++hi;
    const ControlPoint& a = palette[hi - 1];
    const ControlPoint& b = palette[hi];
    const double t = (v - a.position) / (b.position - a.position);
    std::array<std::uint8_t, 3> out{};
    for (std::size_t c = 0; c < 3; ++c) {
        const double x = a.rgb[c] + t * (static_cast<double>(b.rgb[c]) - a.rgb[c]);
        out[c] = static_cast<std::uint8_t>(std::clamp(std::floor(x + 0.5), 0.0, 255.0));
    }
    return out;
}

/// Linear interpolation between bracketing control points, rounded half-up.
/// Field rows map to image rows in the same order.
inline Image colorize(const Field& field, const Palette& palette)
{
    validate_palette(palette);
    Image img{field.width, field.height, {}};
    img.pixels.resize(4 * field.values.size());
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        const auto rgb = palette_color(palette, field.values[i]);
        img.pixels[4 * i] = rgb[0];
        img.pixels[4 * i + 1] = rgb[1];
        img.pixels[4 * i + 2] = rgb[2];
        img.pixels[4 * i + 3] = 255;
    }
    return img;
}

/// Normalized Gaussian taps for offsets -r..r, r = ceil(3 sigma).
inline std::vector<double> gaussian_kernel(double sigma)
{
    if (!(sigma > 0.0))
        throw DomainError("blur sigma must be positive");
    const int r = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(2 * static_cast<std::size_t>(r) + 1);
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
        const double w = std::exp(-0.5 * (i * i) / (sigma * sigma));
        k[static_cast<std::size_t>(i + r)] = w;
        sum += w;
    }
    for (auto& w : k)
        w /= sum;
    return k;
}

/// Separable Gaussian blur; samples beyond the border repeat the edge value.
inline Field blur(const Field& in, double sigma)
{
    const auto k = gaussian_kernel(sigma);
    const int r = static_cast<int>(k.size() / 2);
    const int w = in.width, h = in.height;
    auto idx = [w](int x, int y) {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x);
    };
    std::vector<double> tmp(in.values.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int t = -r; t <= r; ++t)
                acc += k[static_cast<std::size_t>(t + r)] * in.values[idx(std::clamp(x + t, 0, w - 1), y)];
            tmp[idx(x, y)] = acc;
        }
    Field out{w, h, std::vector<double>(in.values.size())};
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int t = -r; t <= r; ++t)
                acc += k[static_cast<std::size_t>(t + r)] * tmp[idx(x, std::clamp(y + t, 0, h - 1))];
            out.values[idx(x, y)] = acc;
        }
    return out;
}

/// base + weight * blur(base, sigma), clamped to [0, 1].
inline Field glow(const Field& base, double sigma, double weight = 0.6)
{
    Field b = blur(base, sigma);
    for (std::size_t i = 0; i < b.values.size(); ++i)
        b.values[i] = std::clamp(base.values[i] + weight * b.values[i], 0.0, 1.0);
    return b;
}

/// base + w0 G(2) + w1 G(4) + w2 G(8), clamped to [0, 1].
inline Field bloom(const Field& base, const std::array<double, 3>& weights = {0.5, 0.25, 0.125})
{
    Field out = base;
    constexpr std::array<double, 3> sigmas{2.0, 4.0, 8.0};
    for (std::size_t s = 0; s < 3; ++s) {
        const Field g = blur(base, sigmas[s]);
        for (std::size_t i = 0; i < out.values.size(); ++i)
            out.values[i] += weights[s] * g.values[i];
    }
    for (auto& v : out.values)
        v = std::clamp(v, 0.0, 1.0);
    return out;
}

/// normalize -> composite -> tone map -> colorize. The top image row shows
/// the largest imaginary part.
inline Image render(const density::DensityGrid& grid, const RenderSpec& spec)
{
    Field f{grid.width, grid.height, density::normalize(grid, spec.log_scale)};
    switch (spec.mode) {
    case Mode::PurePixel: break;
    case Mode::SmoothGlow: f = glow(f, spec.glow_sigma, spec.glow_weight); break;
    case Mode::SmokyBloom: f = bloom(f, spec.bloom_weights); break;
    }
    f.values = tone_map(std::move(f.values), spec.gamma, spec.floor);
    // Flip so that row 0 is the top of the picture.
    Field flipped{f.width, f.height, std::vector<double>(f.values.size())};
    const auto w = static_cast<std::size_t>(f.width);
    for (int y = 0; y < f.height; ++y)
        std::copy_n(f.values.begin() + static_cast<long>(static_cast<std::size_t>(y) * w), w,
                    flipped.values.begin() +
                        static_cast<long>(static_cast<std::size_t>(f.height - 1 - y) * w));
    return colorize(flipped, spec.palette);
}

} // namespace polynomiogram::render
