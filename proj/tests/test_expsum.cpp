#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <digitdist/expsum.hpp>

#include "oracles.hpp"

using namespace digitdist;

namespace
{
    double s0_loop(unsigned q, unsigned b, unsigned ell, std::uint64_t N, std::uint64_t D, double xi, unsigned Lambda)
    {
        double total = 0;
        std::uint64_t A = 1;
        for (unsigned i = 0; i < Lambda; ++i)
            A *= q;
        for (std::uint64_t m = D; m < q * D; ++m)
        {
            double best = 0;
            for (std::uint64_t a = 0; a < A; ++a)
            {
                std::complex<double> s = 0;
                for (std::uint64_t n = 0; n < N; ++n)
                    s += std::polar(1.0, 2 * std::numbers::pi *
                                             (static_cast<double>(ell) * oracle::digit_sum(n * m + a, q) / b +
                                              static_cast<double>(n) * xi));
                best = std::max(best, std::abs(s));
            }
            total += best;
        }
        return total;
    }

    std::vector<cplx> random_unit(std::mt19937_64& rng, std::size_t n)
    {
        std::vector<cplx> v(n);
        for (auto& z : v)
            z = e_of(static_cast<double>(rng() >> 11) * 0x1.0p-53);
        return v;
    }
}

TEST(S0, SingleTerm)
{
    for (std::uint64_t D : {2, 3, 7})
    {
        ExpSumConfig c;
        c.params = DigitParams(2, 3, 1);
        c.N = 1;
        c.D = D;
        c.xi = Rational(1, 5);
        EXPECT_NEAR(s0_sum(c).value, static_cast<double>(D), 1e-12);
    }
}

TEST(S0, MatchesTripleLoop)
{
    ExpSumConfig c;
    c.params = DigitParams(2, 2, 1);
    c.N = 8;
    c.D = 2;
    c.xi = 0;
    c.a_window = 6;
    EXPECT_NEAR(s0_sum(c).value, s0_loop(2, 2, 1, 8, 2, 0.0, 6), 1e-9);

    ExpSumConfig d;
    d.params = DigitParams(3, 5, 1);
    d.N = 7;
    d.D = 3;
    d.xi = Rational(2, 7);
    d.a_window = 4;
    EXPECT_NEAR(s0_sum(d).value, s0_loop(3, 5, 1, 7, 3, 2.0 / 7, 4), 1e-9);
}

TEST(S0, DefaultWindowIsSaturated)
{
    // Widening the a-range beyond the default never finds a larger sum.
    for (unsigned b : {2u, 3u})
    {
        ExpSumConfig c;
        c.params = DigitParams(2, b, 1);
        c.N = 6;
        c.D = 3;
        c.xi = Rational(1, 3);
        S0Result base = s0_sum(c);
        c.a_window = base.Lambda + 2;
        S0Result wide = s0_sum(c);
        EXPECT_NEAR(base.value, wide.value, 1e-9);
        for (std::size_t i = 0; i < base.per_m.size(); ++i)
            EXPECT_NEAR(base.per_m[i], wide.per_m[i], 1e-9);
    }
}

TEST(S0, TermsBoundedByN)
{
    ExpSumConfig c;
    c.params = DigitParams(2, 3, 2);
    c.N = 10;
    c.D = 4;
    c.xi = Rational(3, 10);
    auto r = s0_sum(c, 2);
    for (double v : r.per_m)
        EXPECT_LE(v, 10.0 + 1e-9);
    EXPECT_EQ(r.per_m.size(), 4u);
}

TEST(S0, BudgetRejects)
{
    ExpSumConfig c;
    c.params = DigitParams(2, 2, 1);
    c.N = 1000;
    c.D = 1000;
    c.a_window = 40;
    EXPECT_THROW(s0_sum(c), budget_error);
}

TEST(Vdc, ConstantSequence)
{
    std::vector<cplx> v(20, cplx(1, 0));
    auto r = vdc_plain_check(v, 1);
    EXPECT_DOUBLE_EQ(r.lhs, 400.0);
    EXPECT_DOUBLE_EQ(r.rhs, 800.0);
    EXPECT_TRUE(r.holds());
    auto s = vdc_shift_check(v, 1, 3);
    EXPECT_DOUBLE_EQ(s.rhs, 800.0);
}

TEST(Vdc, AlternatingByHand)
{
    std::vector<cplx> v{1, -1, 1, -1};
    auto r = vdc_plain_check(v, 2);
    // sum vanishes; lag-1 correlation has modulus 3
    EXPECT_NEAR(r.lhs, 0.0, 1e-12);
    EXPECT_NEAR(r.rhs, 2 * 16 / 2.0 + 4 * 4 / 2.0 * 3, 1e-12);
    auto s = vdc_shift_check(v, 2, 2);
    // (|I| + K(H-1)) / H * 2 * (4 + |lag 2|) = 3 * 2 * 6
    EXPECT_NEAR(s.rhs, 36.0, 1e-12);
}

TEST(Vdc, RandomSequencesHold)
{
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i)
    {
        std::size_t n = 1 + rng() % 64;
        auto v = random_unit(rng, n);
        auto corr = correlation_table(v);
        for (std::size_t H = 1; H <= n; ++H)
        {
            EXPECT_TRUE(vdc_plain_check(v, H, corr).holds());
            for (std::size_t K = 1; K <= 8; ++K)
                EXPECT_TRUE(vdc_shift_check(v, H, K, corr).holds());
        }
    }
}

TEST(Vdc, Preconditions)
{
    std::vector<cplx> v(4, 1);
    EXPECT_THROW(vdc_plain_check(v, 0), precondition_error);
    EXPECT_THROW(vdc_plain_check(v, 5), precondition_error);
    EXPECT_THROW(vdc_shift_check(v, 2, 0), precondition_error);
}

TEST(Carry, MatchesDefinitionLoop)
{
    auto r = carry_exceptions(2, 3, 1, 1, 0, 0, 100);
    std::uint64_t want = 0;
    for (std::uint64_t n = 0; n < 100; ++n)
    {
        long long full = static_cast<long long>(oracle::digit_sum(n + 1, 2)) - oracle::digit_sum(n, 2);
        long long tr = static_cast<long long>(oracle::digit_sum_trunc(n + 1, 2, 3)) - oracle::digit_sum_trunc(n, 2, 3);
        want += full != tr;
    }
    EXPECT_EQ(r.count, want);
    EXPECT_LT(Rational(r.count), r.bound);
}

TEST(Carry, NonIntegerSlope)
{
    auto r = carry_exceptions(3, 2, 2, Rational(5, 3), Rational(1, 2), 0, 500);
    EXPECT_LT(Rational(r.count), r.bound);
    std::uint64_t want = 0;
    for (std::uint64_t n = 0; n < 500; ++n)
    {
        auto fl = [](std::uint64_t x) { return (10 * x + 3) / 6; };  // floor(5x/3 + 1/2)
        std::uint64_t u = fl(n), v = fl(n + 2);
        long long full = static_cast<long long>(oracle::digit_sum(v, 3)) - oracle::digit_sum(u, 3);
        long long tr = static_cast<long long>(oracle::digit_sum_trunc(v, 3, 2)) - oracle::digit_sum_trunc(u, 3, 2);
        want += full != tr;
    }
    EXPECT_EQ(r.count, want);
}

TEST(Carry, DegenerateBound)
{
    // r alpha >= q^lambda makes the bound exceed N
    auto r = carry_exceptions(2, 1, 4, 1, 0, 0, 50);
    EXPECT_GE(r.bound, Rational(50));
}

TEST(Congruence, Examples)
{
    EXPECT_EQ(congruence_solutions(3, 0, 2, 4, 1), 1u);
    EXPECT_EQ(congruence_solutions(1, 5, 2, 4, 1), 1u);
    EXPECT_EQ(congruence_solutions(2, 1, 2, 3, 2), 0u);
    EXPECT_THROW(congruence_solutions(4, 0, 2, 3, 2), precondition_error);
    EXPECT_THROW(congruence_solutions(6, 0, 6, 3, 1), precondition_error);
}

TEST(Congruence, MatchesLoop)
{
    for (unsigned q : {2u, 6u, 10u})
        for (unsigned rho = 1; rho <= 3; ++rho)
            for (unsigned gamma = 1; gamma <= rho; ++gamma)
            {
                std::uint64_t mod = ipow_u64(q, rho);
                for (std::uint64_t M = 1; M < 40; ++M)
                {
                    bool ok = true;
                    for (unsigned p : prime_divisors(q))
                        ok = ok && M % ipow_u64(p, gamma) != 0;
                    if (!ok)
                        continue;
                    for (std::uint64_t a = 0; a < mod; a += 1 + mod / 17)
                    {
                        std::uint64_t c = 0;
                        for (std::uint64_t h = 0; h < mod; ++h)
                            c += (h * M) % mod == a;
                        EXPECT_EQ(congruence_solutions(M, a, q, rho, gamma), c);
                    }
                }
            }
}

TEST(Integral, TrivialCases)
{
    std::vector<cplx> zero(10, 0);
    auto r = integral_inequality_check(zero, 0, 5, 256);
    EXPECT_EQ(r.lhs, 0);
    EXPECT_TRUE(r.holds());
    std::vector<cplx> v(10, 1);
    EXPECT_EQ(integral_inequality_check(v, 3, 3, 256).lhs, 0);
}

TEST(Integral, RandomSequencesHold)
{
    std::mt19937_64 rng(33);
    for (int i = 0; i < 100; ++i)
    {
        std::size_t n = 1 + rng() % 32;
        auto v = random_unit(rng, n);
        long long x = static_cast<long long>(rng() % 50);
        long long y = x + static_cast<long long>(rng() % (n + 1));
        auto r = integral_inequality_check(v, x, y, 1 << 16);
        EXPECT_TRUE(r.holds()) << r.lhs << " " << r.rhs << " " << r.quadrature_error;
    }
}
