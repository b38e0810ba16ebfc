#pragma once

#include "polynomiogram/error.hpp"
#include "polynomiogram/expr.hpp"
#include "polynomiogram/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace polynomiogram {

using complex = std::complex<double>;

/// Dense coefficients [a_0, ..., a_n].
///
/// `coeffs_lo`, when non-empty, holds the rounding tail of each coefficient
/// (exact value = coeffs[k] + coeffs_lo[k]) for extended-precision solves.
struct Polynomial
{
    std::vector<complex> coeffs;
    std::vector<complex> coeffs_lo;

    Polynomial() = default;
    explicit Polynomial(std::vector<complex> c) : coeffs(std::move(c)) {}
    Polynomial(std::initializer_list<complex> c) : coeffs(c) {}

    int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
    const complex& leading() const { return coeffs.back(); }
    bool has_tail() const noexcept { return !coeffs_lo.empty(); }
};

inline constexpr double kLeadingEpsilon = 1e-12;

/// True when the leading coefficient is negligible against the largest one.
inline bool leading_vanishes(const std::vector<complex>& c)
{
    if (c.empty())
        return true;
    double biggest = 0.0;
    for (const auto& a : c)
        biggest = std::max(biggest, std::abs(a));
    return !(std::abs(c.back()) > kLeadingEpsilon * biggest);
}

namespace family {

struct ExprFamily
{
    int degree;
    std::map<int, expr::CoefficientExpr> terms;
};

struct KacFamily
{
    int degree;
    std::uint64_t seed;
};

struct LucasFamily
{
    int degree;
};

/// x^3 + a x^2 + b x - 1 with a = Re t1, b = Re t2.
struct CubicFamily
{
};

struct ExplicitFamily
{
    std::vector<std::vector<complex>> polynomials;
};

class FamilySpec
{
public:
    using Variant = std::variant<ExprFamily, KacFamily, LucasFamily, CubicFamily, ExplicitFamily>;

    FamilySpec(ExprFamily f) : v_(std::move(f))
    {
        const auto& e = std::get<ExprFamily>(v_);
        if (e.degree < 1)
            throw DomainError("expression family degree must be positive");
        if (!e.terms.count(e.degree))
            throw DomainError("expression family needs a term for exponent " +
                              std::to_string(e.degree));
        for (const auto& [k, term] : e.terms)
            if (k < 0 || k > e.degree || term.empty())
                throw DomainError("term exponent " + std::to_string(k) + " outside [0, degree]");
    }
    FamilySpec(KacFamily f) : v_(f)
    {
        if (f.degree < 1)
            throw DomainError("Kac degree must be positive");
    }
    FamilySpec(LucasFamily f) : v_(f)
    {
        if (f.degree < 1)
            throw DomainError("Lucas degree must be positive");
    }
    FamilySpec(CubicFamily f) : v_(f) {}
    FamilySpec(ExplicitFamily f) : v_(std::move(f))
    {
        const auto& e = std::get<ExplicitFamily>(v_);
        if (e.polynomials.empty())
            throw DomainError("explicit family needs at least one polynomial");
        for (const auto& p : e.polynomials)
            if (p.size() < 2 || p.back() == complex{})
                throw DomainError("explicit polynomial needs degree >= 1 and a nonzero leading coefficient");
    }

    const Variant& variant() const noexcept { return v_; }

    /// Highest degree any instance can have.
    int max_degree() const
    {
        return std::visit(
            [](const auto& f) -> int {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, CubicFamily>)
                    return 3;
                else if constexpr (std::is_same_v<T, ExplicitFamily>) {
                    std::size_t d = 0;
                    for (const auto& p : f.polynomials)
                        d = std::max(d, p.size() - 1);
                    return static_cast<int>(d);
                } else
                    return f.degree;
            },
            v_);
    }

private:
    Variant v_;
};

using LucasInt = __int128;

/// Exact integer coefficients of L_n (L_0 = 2, L_1 = x, L_{n+1} = x L_n + L_{n-1}).
inline std::vector<LucasInt> lucas_coefficients(int n)
{
    if (n < 0)
        throw DomainError("Lucas index must be nonnegative");
    std::vector<LucasInt> prev{2};
    if (n == 0)
        return prev;
    std::vector<LucasInt> cur{0, 1};
    for (int m = 1; m < n; ++m) {
        std::vector<LucasInt> next(cur.size() + 1, 0);
        for (std::size_t k = 0; k < cur.size(); ++k)
            next[k + 1] = cur[k];
        for (std::size_t k = 0; k < prev.size(); ++k)
            if (__builtin_add_overflow(next[k], prev[k], &next[k]))
                throw OverflowError("Lucas coefficients exceed 128-bit range at n = " +
                                    std::to_string(m + 1));
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

/// Splits an integer into hi + lo doubles; exact whenever |v| < 2^106.
inline std::pair<double, double> split_int(LucasInt v)
{
    const double hi = static_cast<double>(v);
    const LucasInt rest = v - static_cast<LucasInt>(hi);
    return {hi, static_cast<double>(rest)};
}

inline Polynomial lucas_polynomial(int n)
{
    const auto ints = lucas_coefficients(n);
    Polynomial p;
    p.coeffs.reserve(ints.size());
    bool inexact = false;
    std::vector<complex> lo;
    for (LucasInt v : ints) {
        auto [hi, tail] = split_int(v);
        p.coeffs.emplace_back(hi, 0.0);
        lo.emplace_back(tail, 0.0);
        inexact = inexact || tail != 0.0;
    }
    if (inexact)
        p.coeffs_lo = std::move(lo);
    return p;
}

/// Builds the polynomial for one sample; std::nullopt marks a rejected
/// sample whose leading coefficient vanishes. Throws EvalError.
inline std::optional<Polynomial> instantiate(const FamilySpec& spec, complex t1, complex t2,
                                             std::uint64_t rng_index)
{
    std::vector<complex> c;
    Polynomial lucas;
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ExprFamily>) {
                c.assign(static_cast<std::size_t>(f.degree) + 1, complex{});
                for (const auto& [k, term] : f.terms)
                    c[static_cast<std::size_t>(k)] = expr::evaluate(term, t1, t2);
            } else if constexpr (std::is_same_v<T, KacFamily>) {
                c.resize(static_cast<std::size_t>(f.degree) + 1);
                for (std::size_t k = 0; k < c.size(); ++k)
                    c[k] = {sampling::gaussian(f.seed, 2 + k, rng_index), 0.0};
            } else if constexpr (std::is_same_v<T, LucasFamily>) {
                lucas = lucas_polynomial(f.degree);
            } else if constexpr (std::is_same_v<T, CubicFamily>) {
                c = {complex{-1.0}, complex{t2.real()}, complex{t1.real()}, complex{1.0}};
            } else {
                c = f.polynomials[rng_index % f.polynomials.size()];
            }
        },
        spec.variant());
    if (!lucas.coeffs.empty())
        return lucas;
    if (leading_vanishes(c))
        return std::nullopt;
    return Polynomial(std::move(c));
}

} // namespace family
} // namespace polynomiogram
