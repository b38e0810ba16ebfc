#pragma once

// Property checks shared by the solver unit tests and the acceptance run.

#include "polynomiogram/analysis.hpp"
#include "polynomiogram/family.hpp"
#include "polynomiogram/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace support {

using polynomiogram::complex;
using polynomiogram::Polynomial;

/// Coefficients uniform in [-1,1]^2 (or [-1,1] when `real`), leading kept
/// away from zero.
inline Polynomial random_polynomial(std::mt19937_64& rng, int degree, bool real = false)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<complex> c(static_cast<std::size_t>(degree) + 1);
    for (auto& a : c)
        a = {u(rng), real ? 0.0 : u(rng)};
    while (std::abs(c.back()) < 0.1)
        c.back() = {u(rng), real ? 0.0 : u(rng)};
    return Polynomial(std::move(c));
}

struct VietaError
{
    double sum; // relative to sum |z_k|, the scale at which the sum is formed
    double product; // relative to |a_0 / a_n|
};

inline VietaError vieta_error(const Polynomial& p, const std::vector<complex>& roots)
{
    const std::size_t n = roots.size();
    complex sum{}, prod{1.0};
    double scale = 0.0;
    for (const auto& z : roots) {
        sum += z;
        prod *= z;
        scale += std::abs(z);
    }
    const complex an = p.coeffs[n];
    const complex want_sum = -p.coeffs[n - 1] / an;
    const complex want_prod = (n % 2 ? -1.0 : 1.0) * p.coeffs[0] / an;
    return {std::abs(sum - want_sum) / std::max(scale, std::abs(want_sum)),
            std::abs(prod - want_prod) / std::abs(want_prod)};
}

/// Reals (|Im| <= 1e-8 (1 + |z|)) plus conjugate pairs matched within
/// tol (1 + |z|).
inline bool conjugate_paired(std::vector<complex> roots, double tol = 1e-8)
{
    std::vector<complex> upper, lower;
    for (const auto& z : roots) {
        if (polynomiogram::analysis::is_real(z))
            continue;
        (z.imag() > 0.0 ? upper : lower).push_back(z);
    }
    if (upper.size() != lower.size())
        return false;
    for (auto& z : lower)
        z = std::conj(z);
    const auto d = polynomiogram::analysis::match_greedy(upper, lower);
    for (std::size_t k = 0; k < d.size(); ++k)
        if (d[k] > tol * (1.0 + std::abs(upper[k])))
            return false;
    return true;
}

/// Largest nearest-neighbour distance between two root multisets.
inline double matched_distance(const std::vector<complex>& a, const std::vector<complex>& b)
{
    const auto d = polynomiogram::analysis::match_greedy(a, b);
    return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

/// Random degree-n polynomial with simple, well-separated roots: built from
/// roots jittered off the unit circle, then expanded.
inline Polynomial well_conditioned(std::mt19937_64& rng, int n)
{
    std::uniform_real_distribution<double> jitter(-0.25, 0.25);
    std::uniform_real_distribution<double> radius(0.6, 1.4);
    std::vector<complex> c{1.0};
    for (int k = 0; k < n; ++k) {
        const double angle = 2.0 * M_PI * (k + 0.5 + jitter(rng)) / n;
        const complex r = std::polar(radius(rng), angle);
        std::vector<complex> next(c.size() + 1);
        for (std::size_t j = 0; j < c.size(); ++j) {
            next[j + 1] += c[j];
            next[j] -= r * c[j];
        }
        c = std::move(next);
    }
    return Polynomial(std::move(c));
}

} // namespace support
