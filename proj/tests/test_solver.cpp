#include "polynomiogram/family.hpp"
#include "polynomiogram/solver.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace polynomiogram;
using namespace polynomiogram::solver;

namespace {

void expect_roots(const std::vector<complex>& got, std::vector<complex> want, double tol)
{
    ASSERT_EQ(got.size(), want.size());
    const auto d = analysis::match_greedy(got, want);
    for (std::size_t k = 0; k < d.size(); ++k)
        EXPECT_LE(d[k], tol) << "root " << got[k];
}

const Polynomial kP4{-1.0, 3.0, 3.0, 1.0}; // x^3 + 3x^2 + 3x - 1

} // namespace

TEST(Companion, MatrixExamples)
{
    const Matrix m = companion_matrix(Polynomial{1.0, 0.0, 1.0});
    EXPECT_EQ(m(0, 0), complex(0.0));
    EXPECT_EQ(m(0, 1), complex(-1.0));
    EXPECT_EQ(m(1, 0), complex(1.0));
    EXPECT_EQ(m(1, 1), complex(0.0));

    const Matrix lin = companion_matrix(Polynomial{-2.5, 1.0});
    ASSERT_EQ(lin.n, 1u);
    EXPECT_EQ(lin(0, 0), complex(2.5));

    const Matrix cube = companion_matrix(Polynomial{-1.0, 0.0, 0.0, 1.0});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            EXPECT_EQ(cube(i, j), complex(i == j + 1 ? 1.0 : 0.0));
    EXPECT_EQ(cube(0, 2), complex(1.0));
    EXPECT_EQ(cube(1, 2), complex(0.0));
    EXPECT_EQ(cube(2, 2), complex(0.0));

    const Matrix scaled = companion_matrix(Polynomial{2.0, 0.0, 2.0});
    EXPECT_EQ(scaled(0, 1), complex(-1.0));

    EXPECT_THROW(companion_matrix(Polynomial{3.0}), DegenerateInput);
}

TEST(Companion, Examples)
{
    expect_roots(roots_companion(Polynomial{1.0, 0.0, 1.0}).roots, {{0, 1}, {0, -1}}, 1e-15);
    expect_roots(roots_companion(Polynomial{-1.0, 0.0, 0.0, 1.0}).roots,
                 {1.0, {-0.5, 0.8660254037844386}, {-0.5, -0.8660254037844386}}, 1e-10);
    const auto rs = roots_companion(kP4);
    EXPECT_EQ(rs.engine, Engine::CompanionQR);
    const std::vector<complex> table{{0.26, 0.0}, {-1.63, 1.09}, {-1.63, -1.09}};
    for (const auto& want : table) {
        bool found = false;
        for (const auto& z : rs.roots)
            found |= analysis::matches_2dp(z, want);
        EXPECT_TRUE(found) << want;
    }
}

TEST(Companion, Errors)
{
    EXPECT_THROW(roots_companion(Polynomial{1.0}), DegenerateInput);
    EXPECT_THROW(roots_companion(Polynomial{1.0, 0.0}), DegenerateInput);
    EXPECT_THROW(roots_companion(Polynomial{std::nan(""), 1.0}), DegenerateInput);
    std::vector<complex> big(600, 1.0);
    EXPECT_THROW(roots_companion(Polynomial(big)), DegreeCapExceeded);
    EXPECT_THROW(roots_companion(Polynomial{1.0, 1.0, 1.0}, 1), DegreeCapExceeded);
}

TEST(Companion, ExactZeroRootsSplitOff)
{
    // x^3 (x - 2): the triple zero comes back exactly.
    const auto rs = roots_companion(Polynomial{0.0, 0.0, 0.0, -2.0, 1.0});
    ASSERT_EQ(rs.roots.size(), 4u);
    int zeros = 0;
    for (const auto& z : rs.roots)
        zeros += z == complex{};
    EXPECT_EQ(zeros, 3);
}

TEST(Companion, RootSetInvariants)
{
    std::mt19937_64 rng(1);
    for (int k = 0; k < 200; ++k) {
        const int n = 1 + static_cast<int>(rng() % 30);
        const auto p = support::random_polynomial(rng, n);
        const auto rs = roots_companion(p);
        ASSERT_EQ(rs.roots.size(), static_cast<std::size_t>(n));
        ASSERT_EQ(rs.residuals.size(), static_cast<std::size_t>(n));
        for (std::size_t j = 0; j < rs.roots.size(); ++j) {
            EXPECT_TRUE(std::isfinite(rs.roots[j].real()) && std::isfinite(rs.roots[j].imag()));
            EXPECT_GE(rs.residuals[j], 0.0);
        }
    }
}

TEST(Aberth, Examples)
{
    expect_roots(roots_aberth(Polynomial{1.0, 0.0, 1.0}).roots, {{0, 1}, {0, -1}}, 1e-15);
    const double c1 = 2.0 * std::cos(M_PI / 8.0), c3 = 2.0 * std::cos(3.0 * M_PI / 8.0);
    EXPECT_NEAR(c1, 1.8477590, 1e-7);
    EXPECT_NEAR(c3, 0.7653669, 1e-7);
    expect_roots(roots_aberth(family::lucas_polynomial(4)).roots,
                 {{0, c1}, {0, -c1}, {0, c3}, {0, -c3}}, 1e-10);
    const auto a = roots_aberth(kP4);
    EXPECT_EQ(a.engine, Engine::Aberth);
    expect_roots(a.roots, roots_companion(kP4).roots, 1e-8);
}

TEST(Aberth, DoubleDoublePrecision)
{
    PrecisionConfig cfg;
    cfg.significand_bits = 106;
    const auto rs = roots_aberth(Polynomial{-2.0, 0.0, 1.0}, cfg);
    for (const auto& z : rs.roots)
        EXPECT_NEAR(std::abs(z.real()), std::sqrt(2.0), 1e-16);
}

TEST(Aberth, ConfigValidation)
{
    PrecisionConfig cfg;
    cfg.significand_bits = 64;
    EXPECT_THROW(roots_aberth(kP4, cfg), DomainError);
    cfg = {};
    cfg.max_iterations = 0;
    EXPECT_THROW(roots_aberth(kP4, cfg), DomainError);
    EXPECT_THROW(roots_aberth(Polynomial{1.0}), DegenerateInput);
}

TEST(Aberth, NoConvergenceReportsCount)
{
    PrecisionConfig cfg;
    cfg.max_iterations = 1;
    std::mt19937_64 rng(4);
    try {
        roots_aberth(support::random_polynomial(rng, 30), cfg);
        FAIL() << "expected NoConvergence";
    } catch (const NoConvergence& e) {
        EXPECT_GT(e.unconverged(), 0u);
        EXPECT_LE(e.unconverged(), 30u);
    }
}

TEST(Aberth, ResidualsWithinFreezeBound)
{
    // Stagnation-frozen roots may sit a few ulps above the residual bound.
    std::mt19937_64 rng(9);
    const double bound = 8.0 * 4.0 * unit_roundoff(53);
    for (int k = 0; k < 300; ++k) {
        const auto p = support::random_polynomial(rng, 1 + static_cast<int>(rng() % 40));
        const auto rs = roots_aberth(p);
        for (double r : rs.residuals)
            EXPECT_LE(r, bound);
    }
}

TEST(Aberth, ExactZeroRootsSplitOff)
{
    const auto rs = roots_aberth(Polynomial{0.0, 0.0, 1.0, 0.0, 1.0});
    int zeros = 0;
    for (const auto& z : rs.roots)
        zeros += z == complex{};
    EXPECT_EQ(zeros, 2);
    expect_roots(rs.roots, {0.0, 0.0, {0, 1}, {0, -1}}, 1e-15);
}

TEST(Properties, Vieta)
{
    std::mt19937_64 rng(12);
    for (int k = 0; k < 1000; ++k) {
        const auto p = support::random_polynomial(rng, 1 + static_cast<int>(rng() % 12));
        for (const auto& rs : {roots_companion(p), roots_aberth(p)}) {
            const auto e = support::vieta_error(p, rs.roots);
            EXPECT_LE(e.sum, 1e-8);
            EXPECT_LE(e.product, 1e-8);
        }
    }
}

TEST(Properties, ConjugatePairing)
{
    std::mt19937_64 rng(13);
    for (int k = 0; k < 500; ++k) {
        const auto p = support::random_polynomial(rng, 1 + static_cast<int>(rng() % 20), true);
        EXPECT_TRUE(support::conjugate_paired(roots_companion(p).roots));
        EXPECT_TRUE(support::conjugate_paired(roots_aberth(p).roots));
    }
}

TEST(Properties, ScalingInvariance)
{
    std::mt19937_64 rng(14);
    for (int k = 0; k < 200; ++k) {
        const auto p = support::well_conditioned(rng, 2 + static_cast<int>(rng() % 10));
        const auto base_qr = roots_companion(p).roots;
        const auto base_ab = roots_aberth(p).roots;
        for (double c : {2.0, 1e6, 1e-6}) {
            Polynomial q = p;
            for (auto& a : q.coeffs)
                a *= c;
            EXPECT_LE(support::matched_distance(roots_companion(q).roots, base_qr), 1e-10);
            EXPECT_LE(support::matched_distance(roots_aberth(q).roots, base_ab), 1e-10);
        }
    }
}

TEST(Properties, CrossEngineAgreement)
{
    std::mt19937_64 rng(15);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const auto p = support::well_conditioned(rng, 20);
        worst = std::max(worst, support::matched_distance(roots_companion(p).roots, roots_aberth(p).roots));
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(Residual, Examples)
{
    const Polynomial p{1.0, 0.0, 1.0};
    EXPECT_LE(scaled_residual(p, {0.0, 1.0}), 1e-16);
    EXPECT_EQ(scaled_residual(p, 0.0), 1.0);
    EXPECT_EQ(scaled_residual(Polynomial{0.0, 1.0}, 0.0), 0.0);
}

TEST(Residual, Homogeneous)
{
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        const auto p = support::random_polynomial(rng, 8);
        const complex z(u(rng), u(rng));
        for (double c : {2.0, 0.5, 1024.0}) {
            Polynomial q = p;
            for (auto& a : q.coeffs)
                a *= c;
            // Power-of-two scaling commutes with every rounding step.
            EXPECT_EQ(scaled_residual(q, z), scaled_residual(p, z));
        }
        Polynomial q = p;
        for (auto& a : q.coeffs)
            a *= complex(0.3, -1.7);
        EXPECT_NEAR(scaled_residual(q, z), scaled_residual(p, z), 1e-12 + 1e-12 * scaled_residual(p, z));
    }
}

TEST(Polish, ExactRootsUnchanged)
{
    const Polynomial p{1.0, 0.0, 1.0};
    RootSet rs;
    rs.roots = {{0.0, 1.0}, {0.0, -1.0}};
    rs.residuals = {0.0, 0.0};
    const auto out = polish(rs, p);
    EXPECT_EQ(out.roots, rs.roots);
}

TEST(Polish, QuadraticConvergence)
{
    const Polynomial p{1.0, 0.0, 1.0};
    RootSet rs;
    rs.roots = {{1e-6, 1.0}};
    rs.residuals = {scaled_residual(p, rs.roots[0])};
    const auto out = polish(rs, p);
    EXPECT_LT(std::abs(out.roots[0] - complex(0.0, 1.0)), 1e-12);
}

TEST(Polish, ResidualsNonIncreasing)
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1e-4, 1e-4);
    for (int k = 0; k < 300; ++k) {
        const auto p = support::random_polynomial(rng, 2 + static_cast<int>(rng() % 15));
        auto rs = roots_companion(p);
        for (auto& z : rs.roots)
            z += complex(u(rng), u(rng));
        for (std::size_t j = 0; j < rs.roots.size(); ++j)
            rs.residuals[j] = scaled_residual(p, rs.roots[j]);
        const auto out = polish(rs, p);
        for (std::size_t j = 0; j < rs.roots.size(); ++j)
            EXPECT_LE(out.residuals[j], rs.residuals[j]);
    }
}

TEST(Refine, LiftsEarlyFrozenLucasRoots)
{
    const Polynomial p = family::lucas_polynomial(48);
    const auto raw = roots_aberth(p);
    const auto fine = refine(raw, p);
    EXPECT_GT(analysis::lucas_max_error(48, raw).max_distance, 1e-6);
    EXPECT_LT(analysis::lucas_max_error(48, fine).max_distance, 1e-12);
}

TEST(Refine, KeepsZeroRootsAndOrder)
{
    const Polynomial p{0.0, 0.0, -2.0, 0.0, 1.0};
    const auto rs = roots_aberth(p);
    const auto fine = refine(rs, p);
    ASSERT_EQ(fine.roots.size(), 4u);
    EXPECT_EQ(fine.roots[0], complex{});
    EXPECT_EQ(fine.roots[1], complex{});
    expect_roots(fine.roots, {0.0, 0.0, std::sqrt(2.0), -std::sqrt(2.0)}, 1e-15);
}
