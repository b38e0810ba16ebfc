// Double-double and quad-double arithmetic against MPFR at 400 bits.

#include "polynomiogram/dd.hpp"
#include "polynomiogram/qd.hpp"

#include <gtest/gtest.h>
#include <mpfr.h>

#include <cmath>
#include <random>

using namespace polynomiogram;

namespace {

class Big
{
public:
    Big() { mpfr_init2(v_, 400); mpfr_set_zero(v_, 1); }
    Big(const Big&) = delete;
    Big& operator=(const Big&) = delete;
    ~Big() { mpfr_clear(v_); }

    template <std::size_t N>
    static void load(Big& b, const std::array<double, N>& parts)
    {
        mpfr_set_zero(b.v_, 1);
        for (double d : parts)
            mpfr_add_d(b.v_, b.v_, d, MPFR_RNDN);
    }
    static void load(Big& b, const dd_real& x) { load(b, std::array<double, 2>{x.hi, x.lo}); }
    static void load(Big& b, const qd_real& x) { load(b, x.x); }

    mpfr_t v_;
};

/// |approx - exact| / |exact|, as a power of two.
template <typename T>
double rel_error_log2(const T& approx, const Big& exact)
{
    Big a, d;
    Big::load(a, approx);
    mpfr_sub(d.v_, a.v_, exact.v_, MPFR_RNDN);
    if (mpfr_zero_p(d.v_))
        return -1000.0;
    mpfr_div(d.v_, d.v_, exact.v_, MPFR_RNDN);
    mpfr_abs(d.v_, d.v_, MPFR_RNDN);
    return std::log2(mpfr_get_d(d.v_, MPFR_RNDN));
}

dd_real random_dd(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> e(-20, 20);
    const double hi = std::ldexp(u(rng), e(rng));
    const dd_real s = dd_detail::two_sum(hi, hi * 0x1.0p-60 * u(rng));
    return s;
}

qd_real random_qd(std::mt19937_64& rng)
{
    const dd_real a = random_dd(rng);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return qd_real(a) + qd_real(a.hi * 0x1.0p-110 * u(rng)) + qd_real(a.hi * 0x1.0p-165 * u(rng));
}

} // namespace

TEST(DoubleDouble, ErrorFreeTransforms)
{
    const dd_real s = dd_detail::two_sum(1.0, 0x1.0p-60);
    EXPECT_EQ(s.hi, 1.0);
    EXPECT_EQ(s.lo, 0x1.0p-60);
    const dd_real p = dd_detail::two_prod(1.0 + 0x1.0p-30, 1.0 + 0x1.0p-30);
    EXPECT_EQ(p.hi, 1.0 + 0x1.0p-29);
    EXPECT_EQ(p.lo, 0x1.0p-60);
}

TEST(DoubleDouble, OperationsAgainstMpfr)
{
    std::mt19937_64 rng(17);
    Big a, b, r;
    double worst_add = -1000, worst_mul = -1000, worst_div = -1000, worst_sqrt = -1000;
    for (int k = 0; k < 20000; ++k) {
        const dd_real x = random_dd(rng), y = random_dd(rng);
        Big::load(a, x);
        Big::load(b, y);
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        if (!mpfr_zero_p(r.v_))
            worst_add = std::max(worst_add, rel_error_log2(x + y, r));
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        worst_mul = std::max(worst_mul, rel_error_log2(x * y, r));
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        worst_div = std::max(worst_div, rel_error_log2(x / y, r));
        const dd_real ax = abs(x);
        Big::load(a, ax);
        mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
        worst_sqrt = std::max(worst_sqrt, rel_error_log2(sqrt(ax), r));
    }
    // Cancellation in x + y can lose relative accuracy only below 2^-104 of the operands.
    EXPECT_LT(worst_mul, -102.0);
    EXPECT_LT(worst_div, -101.0);
    EXPECT_LT(worst_sqrt, -101.0);
    EXPECT_LT(worst_add, -80.0);
}

TEST(DoubleDouble, SameSignAdditionIsTight)
{
    std::mt19937_64 rng(3);
    Big a, b, r;
    double worst = -1000;
    for (int k = 0; k < 20000; ++k) {
        const dd_real x = abs(random_dd(rng)), y = abs(random_dd(rng));
        Big::load(a, x);
        Big::load(b, y);
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        worst = std::max(worst, rel_error_log2(x + y, r));
    }
    EXPECT_LT(worst, -103.0);
}

TEST(DoubleDouble, ComplexDivisionScales)
{
    const dd_complex big{dd_real(1e300), dd_real(1e300)};
    const dd_complex q = big / big;
    EXPECT_NEAR(to_double(q.re), 1.0, 1e-15);
    EXPECT_NEAR(to_double(q.im), 0.0, 1e-15);
    const dd_complex i{dd_real(0.0), dd_real(1.0)};
    const dd_complex one = i * i * dd_complex(dd_real(-1.0));
    EXPECT_EQ(to_double(one.re), 1.0);
}

TEST(QuadDouble, OperationsAgainstMpfr)
{
    std::mt19937_64 rng(23);
    Big a, b, r;
    double worst_mul = -1000, worst_add = -1000;
    for (int k = 0; k < 20000; ++k) {
        const qd_real x = random_qd(rng), y = random_qd(rng);
        Big::load(a, x);
        Big::load(b, y);
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        worst_mul = std::max(worst_mul, rel_error_log2(x * y, r));
        if (std::signbit(x.x[0]) == std::signbit(y.x[0])) {
            mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
            worst_add = std::max(worst_add, rel_error_log2(x + y, r));
        }
    }
    EXPECT_LT(worst_mul, -190.0);
    EXPECT_LT(worst_add, -200.0);
}

TEST(QuadDouble, HornerAgainstMpfr)
{
    // (x - 1)^12 expanded, evaluated next to its root where every term cancels.
    const double c[13] = {1, -12, 66, -220, 495, -792, 924, -792, 495, -220, 66, -12, 1};
    const double x = 1.0 + 0x1.0p-12;
    qd_real acc(c[12]);
    for (int k = 11; k >= 0; --k)
        acc = acc * qd_real(x) + qd_real(c[k]);
    Big exact;
    mpfr_set_d(exact.v_, 0x1.0p-144, MPFR_RNDN);
    EXPECT_LT(rel_error_log2(acc, exact), -150.0);
    EXPECT_EQ(to_double(acc), 0x1.0p-144);
}

TEST(QuadDouble, NarrowingToDoubleDouble)
{
    const qd_real v = qd_real(1.0) + qd_real(0x1.0p-70) + qd_real(0x1.0p-140);
    const dd_real d = to_dd(v);
    EXPECT_EQ(d.hi, 1.0);
    EXPECT_EQ(d.lo, 0x1.0p-70);
    EXPECT_EQ(to_double(-v), -1.0);
}
