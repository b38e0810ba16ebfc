#include "polynomiogram/family.hpp"
#include "polynomiogram/presets.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace polynomiogram;
using namespace polynomiogram::family;

TEST(Instantiate, CubicAtP3)
{
    const auto p = instantiate(CubicFamily{}, complex(3.0, 0.0), complex(-3.0, 0.0), 0);
    ASSERT_TRUE(p);
    EXPECT_EQ(p->coeffs, (std::vector<complex>{-1.0, -3.0, 3.0, 1.0}));
}

TEST(Instantiate, CubicUsesRealParts)
{
    const auto p = instantiate(CubicFamily{}, complex(1.5, 9.0), complex(-2.0, 4.0), 0);
    ASSERT_TRUE(p);
    EXPECT_EQ(p->coeffs, (std::vector<complex>{-1.0, -2.0, 1.5, 1.0}));
}

TEST(Instantiate, VanishingLeaderRejected)
{
    ExprFamily f{1, {}};
    f.terms.emplace(1, expr::parse("t1"));
    f.terms.emplace(0, expr::parse("0"));
    EXPECT_FALSE(instantiate(f, 0.0, 0.0, 0));
    EXPECT_TRUE(instantiate(f, 1.0, 0.0, 0));
    // Relative threshold: tiny against the other coefficients.
    ExprFamily g{1, {}};
    g.terms.emplace(1, expr::parse("t1"));
    g.terms.emplace(0, expr::parse("1"));
    EXPECT_FALSE(instantiate(g, 1e-13, 0.0, 0));
    EXPECT_TRUE(instantiate(g, 1e-11, 0.0, 0));
}

TEST(Instantiate, OmittedExponentsAreZero)
{
    ExprFamily f{5, {}};
    f.terms.emplace(5, expr::parse("1"));
    f.terms.emplace(2, expr::parse("t1 + t2"));
    const auto p = instantiate(f, complex(1.0, 2.0), complex(3.0, 0.0), 0);
    ASSERT_TRUE(p);
    EXPECT_EQ(p->coeffs, (std::vector<complex>{0.0, 0.0, complex(4.0, 2.0), 0.0, 0.0, 1.0}));
}

TEST(Instantiate, EvalErrorPropagates)
{
    ExprFamily f{1, {}};
    f.terms.emplace(1, expr::parse("1"));
    f.terms.emplace(0, expr::parse("1/t1"));
    EXPECT_THROW(instantiate(f, 0.0, 0.0, 0), EvalError);
}

TEST(Instantiate, Deterministic)
{
    const FamilySpec kac = KacFamily{20, 5};
    for (std::uint64_t k = 0; k < 50; ++k)
        EXPECT_EQ(instantiate(kac, 0.0, 0.0, k)->coeffs, instantiate(kac, 0.0, 0.0, k)->coeffs);
}

TEST(Instantiate, ExplicitCyclesThroughPolynomials)
{
    ExplicitFamily f{{{1.0, 1.0}, {2.0, 0.0, 1.0}}};
    EXPECT_EQ(instantiate(f, 0.0, 0.0, 0)->degree(), 1);
    EXPECT_EQ(instantiate(f, 0.0, 0.0, 1)->degree(), 2);
    EXPECT_EQ(instantiate(f, 0.0, 0.0, 2)->degree(), 1);
}

TEST(FamilySpec, Validation)
{
    EXPECT_THROW(FamilySpec(ExprFamily{3, {}}), DomainError);
    ExprFamily missing_top{3, {}};
    missing_top.terms.emplace(2, expr::parse("1"));
    EXPECT_THROW(FamilySpec{missing_top}, DomainError);
    ExprFamily out_of_range{2, {}};
    out_of_range.terms.emplace(2, expr::parse("1"));
    out_of_range.terms.emplace(3, expr::parse("1"));
    EXPECT_THROW(FamilySpec{out_of_range}, DomainError);
    EXPECT_THROW(FamilySpec(KacFamily{0, 1}), DomainError);
    EXPECT_THROW(FamilySpec(ExplicitFamily{}), DomainError);
    EXPECT_THROW(FamilySpec(ExplicitFamily{{{1.0, 0.0}}}), DomainError);
}

TEST(Kac, MomentsOfCoefficients)
{
    const FamilySpec kac = KacFamily{10, 1};
    double sum = 0.0, sq = 0.0;
    std::size_t count = 0;
    for (std::uint64_t k = 0; k < 100000; ++k) {
        const auto p = instantiate(kac, 0.0, 0.0, k);
        for (const auto& c : p->coeffs) {
            ASSERT_TRUE(std::isfinite(c.real()));
            ASSERT_EQ(c.imag(), 0.0);
            sum += c.real();
            sq += c.real() * c.real();
            ++count;
        }
    }
    const double mean = sum / static_cast<double>(count);
    const double var = sq / static_cast<double>(count) - mean * mean;
    EXPECT_NEAR(mean, 0.0, 0.02);
    EXPECT_NEAR(var, 1.0, 0.03);
}

TEST(Kac, CoefficientsAreUncorrelated)
{
    const FamilySpec kac = KacFamily{3, 2};
    double cross = 0.0;
    const int n = 50000;
    for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(n); ++k) {
        const auto c = instantiate(kac, 0.0, 0.0, k)->coeffs;
        cross += c[0].real() * c[1].real();
    }
    EXPECT_NEAR(cross / n, 0.0, 0.02);
}

TEST(Lucas, SmallCases)
{
    EXPECT_EQ(lucas_coefficients(0), (std::vector<LucasInt>{2}));
    EXPECT_EQ(lucas_coefficients(1), (std::vector<LucasInt>{0, 1}));
    EXPECT_EQ(lucas_coefficients(2), (std::vector<LucasInt>{2, 0, 1}));
    EXPECT_EQ(lucas_coefficients(3), (std::vector<LucasInt>{0, 3, 0, 1}));
    EXPECT_EQ(lucas_coefficients(4), (std::vector<LucasInt>{2, 0, 4, 0, 1}));
}

TEST(Lucas, ParityAndLucasNumbers)
{
    // L_n(1) is the n-th Lucas number 2, 1, 3, 4, 7, 11, ...
    LucasInt a = 2, b = 1;
    for (int n = 0; n <= 64; ++n) {
        const auto c = lucas_coefficients(n);
        ASSERT_EQ(c.size(), static_cast<std::size_t>(n) + 1);
        LucasInt sum = 0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            if ((static_cast<int>(k) - n) % 2 != 0) {
                EXPECT_TRUE(c[k] == 0) << "n=" << n << " k=" << k;
            }
            sum += c[k];
        }
        EXPECT_TRUE(sum == a) << "n=" << n;
        const LucasInt next = a + b;
        a = b;
        b = next;
    }
}

TEST(Lucas, ExactTailBeyondDoublePrecision)
{
    EXPECT_FALSE(lucas_polynomial(64).has_tail());
    const Polynomial p = lucas_polynomial(128);
    ASSERT_TRUE(p.has_tail());
    const auto exact = lucas_coefficients(128);
    for (std::size_t k = 0; k < exact.size(); ++k) {
        const LucasInt hi = static_cast<LucasInt>(p.coeffs[k].real());
        const LucasInt lo = static_cast<LucasInt>(p.coeffs_lo[k].real());
        EXPECT_TRUE(hi + lo == exact[k]) << k;
    }
}

TEST(Lucas, OverflowDetected)
{
    EXPECT_THROW(lucas_coefficients(400), OverflowError);
    EXPECT_THROW(lucas_coefficients(-1), DomainError);
}

TEST(Presets, Fusion)
{
    const auto p = preset("fusion");
    const auto poly = instantiate(p.family, 0.0, 0.0, 0);
    ASSERT_TRUE(poly);
    ASSERT_EQ(poly->degree(), 12);
    for (int k = 0; k <= 12; ++k) {
        const double expected = k == 12 ? 1.000 : k == 11 ? 0.606 : k == 8 ? 3.939 : k == 7 ? 2.909 : 0.0;
        EXPECT_EQ(poly->coeffs[static_cast<std::size_t>(k)], complex(expected, 0.0)) << k;
    }
}

TEST(Presets, CubicAndKac)
{
    const auto cubic = preset("cubic");
    EXPECT_EQ(cubic.family.max_degree(), 3);
    for (std::uint64_t k = 0; k < 1000; ++k) {
        const auto [t1, t2] = sampling::draw_pair(cubic.plan, k);
        EXPECT_GE(t1.real(), -3.0);
        EXPECT_LE(t1.real(), 3.0);
        EXPECT_EQ(t2.imag(), 0.0);
    }
    const auto kac = preset("kac50");
    EXPECT_EQ(kac.family.max_degree(), 50);
    EXPECT_EQ(kac.plan.count, 100000u);
    EXPECT_EQ(preset("kac10").family.max_degree(), 10);
}

TEST(Presets, Hibiscus)
{
    const auto h = preset("hibiscus");
    const auto& f = std::get<ExprFamily>(h.family.variant());
    EXPECT_EQ(f.degree, 28);
    ASSERT_EQ(f.terms.size(), 5u);
    EXPECT_EQ(f.terms.at(8).source(), "100*exp(i*5*t2)-100*exp(i*4*t1)");
    EXPECT_EQ(f.terms.at(22).source(), "100*exp(i*5*t1)-100*exp(i*4*t2)");
    const auto p = instantiate(h.family, 0.0, 0.0, 0);
    ASSERT_TRUE(p);
    EXPECT_EQ(p->coeffs[8], complex(0.0, 0.0));
    EXPECT_EQ(p->coeffs[0], complex(-1.0, 0.0));
    EXPECT_TRUE(std::holds_alternative<sampling::Annulus>(h.plan.domain1.variant()));
    EXPECT_TRUE(std::holds_alternative<sampling::Disk>(h.plan.domain2.variant()));
}

TEST(Presets, Unknown)
{
    EXPECT_THROW(preset("mandelbrot"), UnknownPreset);
    for (auto name : kPresetNames)
        EXPECT_NO_THROW(preset(name));
}
