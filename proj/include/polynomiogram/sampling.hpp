#pragma once

// Geometric domains for the latent pair (t1, t2) and a counter-based
// generator whose draws depend only on (seed, stream, index).
//
// Bit-exact format, so that ports in other languages agree:
//
//   mix(z)   = SplitMix64 finalizer:
//                z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//                z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//                z =  z ^ (z >> 31)
//   word(seed, stream, counter)
//            = mix(seed ^ (stream * 0x9E3779B97F4A7C15) ^ (counter * 0xBF58476D1CE4E5B9))
//   uniform  = (word >> 11) * 2^-53                       in [0, 1)
//
// Sample `index` on `stream` uses counters 2*index and 2*index + 1 for its
// two uniforms (u1, u2). Stream 0 feeds t1, stream 1 feeds t2, streams 2+k
// feed the k-th Gaussian coefficient of a random family. Gaussians use the
// cosine branch of Box-Muller, sqrt(-2 ln u1) * cos(2 pi u2), with u1 == 0
// replaced by the smallest positive double.

#include "polynomiogram/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>
#include <variant>

namespace polynomiogram::sampling {

using complex = std::complex<double>;

constexpr std::uint64_t kStreamMultiplier = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kCounterMultiplier = 0xBF58476D1CE4E5B9ull;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t uniform64(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter) noexcept
{
    return mix64(seed ^ (stream * kStreamMultiplier) ^ (counter * kCounterMultiplier));
}

constexpr double to_unit(std::uint64_t word) noexcept
{
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

/// The two uniforms of sample `index` on `stream`.
constexpr std::pair<double, double> uniform_pair(std::uint64_t seed, std::uint64_t stream,
                                                 std::uint64_t index) noexcept
{
    return {to_unit(uniform64(seed, stream, 2 * index)),
            to_unit(uniform64(seed, stream, 2 * index + 1))};
}

inline double box_muller(double u1, double u2) noexcept
{
    if (u1 == 0.0)
        u1 = std::numeric_limits<double>::denorm_min();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline double gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept
{
    auto [u1, u2] = uniform_pair(seed, stream, index);
    return box_muller(u1, u2);
}

struct Circle
{
    double radius;
};

struct Disk
{
    double radius;
};

struct Annulus
{
    double r_in;
    double r_out;
};

struct Segment
{
    complex z0;
    complex z1;
};

class SamplingDomain
{
public:
    using Variant = std::variant<Circle, Disk, Annulus, Segment>;

    SamplingDomain(Circle c) : v_(c)
    {
        if (!(c.radius > 0.0) || !std::isfinite(c.radius))
            throw DomainError("circle radius must be positive");
    }
    SamplingDomain(Disk d) : v_(d)
    {
        if (!(d.radius > 0.0) || !std::isfinite(d.radius))
            throw DomainError("disk radius must be positive");
    }
    SamplingDomain(Annulus a) : v_(a)
    {
        if (!(a.r_in >= 0.0) || !(a.r_out > a.r_in) || !std::isfinite(a.r_out))
            throw DomainError("annulus requires 0 <= r_in < r_out");
    }
    SamplingDomain(Segment s) : v_(s)
    {
        if (s.z0 == s.z1)
            throw DomainError("segment endpoints must differ");
    }

    const Variant& variant() const noexcept { return v_; }

private:
    Variant v_;
};

/// Maps two uniforms in [0,1) onto the domain. Disk and annulus are area-uniform.
inline complex sample_domain(const SamplingDomain& domain, double u1, double u2)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    return std::visit(
        [&](const auto& d) -> complex {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Circle>) {
                return std::polar(d.radius, two_pi * u1);
            } else if constexpr (std::is_same_v<T, Disk>) {
                return std::polar(d.radius * std::sqrt(u1), two_pi * u2);
            } else if constexpr (std::is_same_v<T, Annulus>) {
                const double r2 = d.r_in * d.r_in + u1 * (d.r_out * d.r_out - d.r_in * d.r_in);
                // Rounding can push sqrt just past the radial bounds.
                const double r = std::clamp(std::sqrt(r2), d.r_in, d.r_out);
                return std::polar(r, two_pi * u2);
            } else {
                return d.z0 + u1 * (d.z1 - d.z0);
            }
        },
        domain.variant());
}

struct SamplingPlan
{
    SamplingDomain domain1;
    SamplingDomain domain2;
    std::uint64_t count;
    std::uint64_t seed;
};

inline std::pair<complex, complex> draw_pair(const SamplingPlan& plan, std::uint64_t index)
{
    auto [a1, a2] = uniform_pair(plan.seed, 0, index);
    auto [b1, b2] = uniform_pair(plan.seed, 1, index);
    return {sample_domain(plan.domain1, a1, a2), sample_domain(plan.domain2, b1, b2)};
}

} // namespace polynomiogram::sampling
