#pragma once

// Built-in configurations: the Kac ensembles, Lucas, the cubic bifurcation
// box, and the two artwork polynomials.

#include "polynomiogram/error.hpp"
#include "polynomiogram/expr.hpp"
#include "polynomiogram/family.hpp"
#include "polynomiogram/sampling.hpp"

#include <array>
#include <string>
#include <string_view>

namespace polynomiogram::family {

struct Preset
{
    FamilySpec family;
    sampling::SamplingPlan plan;
};

inline constexpr std::array<std::string_view, 6> kPresetNames{"kac10", "kac50", "lucas",
                                                              "cubic", "hibiscus", "fusion"};

inline constexpr std::uint64_t kPresetSeed = 1;
inline constexpr int kLucasPresetDegree = 64;

inline Preset preset(std::string_view name)
{
    using namespace sampling;
    const SamplingPlan unit_plan{Circle{1.0}, Circle{1.0}, 1, kPresetSeed};

    if (name == "kac10" || name == "kac50") {
        const int degree = name == "kac10" ? 10 : 50;
        SamplingPlan plan = unit_plan;
        plan.count = 100000;
        return {KacFamily{degree, kPresetSeed}, plan};
    }
    if (name == "lucas")
        return {LucasFamily{kLucasPresetDegree}, unit_plan};
    if (name == "cubic") {
        const Segment box{complex{-3.0, 0.0}, complex{3.0, 0.0}};
        return {CubicFamily{}, SamplingPlan{box, box, 100000, kPresetSeed}};
    }
    if (name == "hibiscus") {
        ExprFamily f{28, {}};
        f.terms.emplace(0, expr::parse("-1"));
        f.terms.emplace(1, expr::parse("1"));
        f.terms.emplace(8, expr::parse("100*exp(i*5*t2)-100*exp(i*4*t1)"));
        f.terms.emplace(22, expr::parse("100*exp(i*5*t1)-100*exp(i*4*t2)"));
        f.terms.emplace(28, expr::parse("1"));
        return {f, SamplingPlan{Annulus{0.5, 1.0}, Disk{1.0}, 100000, kPresetSeed}};
    }
    if (name == "fusion") {
        std::vector<complex> c(13, complex{});
        c[12] = 1.000;
        c[11] = 0.606;
        c[8] = 3.939;
        c[7] = 2.909;
        return {ExplicitFamily{{c}}, unit_plan};
    }
    throw UnknownPreset("unknown preset '" + std::string(name) + "'");
}

} // namespace polynomiogram::family
