#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "common.hpp"
#include "digitcore.hpp"
#include "parallel.hpp"
#include "rational.hpp"
#include "summation.hpp"

namespace digitdist
{
    struct ExpSumConfig
    {
        DigitParams params;
        std::uint64_t N = 1;
        std::uint64_t D = 2;
        Rational xi = 0;
        unsigned a_window = 0;  // 0 selects the default window
    };

    // Smallest L with q^L >= v.
    inline unsigned ceil_log(std::uint64_t v, unsigned q)
    {
        unsigned L = 0;
        unsigned __int128 p = 1;
        while (p < v)
        {
            p *= q;
            ++L;
        }
        return L;
    }

    // Default a-window for moduli m <= m_max. Writing a = a' + q^L u with
    // q^L >= (N-1) m, the inner modulus depends only on a' and on the number
    // of trailing (q-1) digits of u taken mod b, so a < q^{L+b-1} already
    // realizes every value of the sup over a >= 0. The conventional choice
    // ceil(log_q(2 N m)) + 2 is kept when it is larger.
    inline unsigned default_a_window(unsigned q, unsigned b, std::uint64_t N, std::uint64_t m_max)
    {
        unsigned conventional = ceil_log(2 * N * m_max, q) + 2;
        unsigned exact = ceil_log((N - 1) * m_max, q) + b - 1;
        return std::max({conventional, exact, 1u});
    }

    struct PhaseTable
    {
        unsigned order;      // lcm(b, den(xi))
        std::uint64_t s_mul; // ell * order / b
        std::uint64_t n_mul; // num(xi) mod den * order / den
        std::vector<cplx> roots;
    };

    inline PhaseTable phase_table(const DigitParams& p, const Rational& xi)
    {
        Rational f = frac(xi);
        BigInt d = den(f);
        require(d <= 1'000'000, "denominator of xi too large for the phase table");
        unsigned dd = d.convert_to<unsigned>();
        unsigned order = std::lcm(p.b, dd);
        PhaseTable t{order, static_cast<std::uint64_t>(p.ell) * (order / p.b),
                     num(f).convert_to<std::uint64_t>() * (order / dd), roots_of_unity(order)};
        return t;
    }

    // max over a in [0, q^Lambda) of |sum_{n<N} e(ell s_q(nm+a)/b) e(n xi)|.
    inline double s0_inner_max(const DigitParams& p, std::uint64_t N, std::uint64_t m, const PhaseTable& tab,
                               unsigned Lambda)
    {
        const std::uint64_t A = ipow_u64(p.q, Lambda);
        std::vector<cplx> terms(N);
        double best = 0;
        for (std::uint64_t a = 0; a < A; ++a)
        {
            for (std::uint64_t n = 0; n < N; ++n)
            {
                std::uint64_t idx = (tab.s_mul * digit_sum_u64(n * m + a, p.q) + tab.n_mul * (n % tab.order)) % tab.order;
                terms[n] = tab.roots[idx];
            }
            best = std::max(best, std::abs(pairwise_sum(terms)));
        }
        return best;
    }

    struct S0Result
    {
        double value = 0;
        unsigned Lambda = 0;
        std::vector<double> per_m;  // inner max for m = D .. qD-1
    };

    inline S0Result s0_sum(const ExpSumConfig& cfg, unsigned workers = 1)
    {
        require(cfg.N >= 1, "N must be at least 1");
        require(cfg.D >= 2, "D must be at least 2");
        const DigitParams& p = cfg.params;
        const std::uint64_t m_hi = p.q * cfg.D;
        S0Result r;
        r.Lambda = cfg.a_window ? cfg.a_window : default_a_window(p.q, p.b, cfg.N, m_hi - 1);
        long double work = std::pow(static_cast<long double>(p.q), r.Lambda) * cfg.N * m_hi;
        Budget::enumeration().charge(work, "s0_sum");
        PhaseTable tab = phase_table(p, cfg.xi);
        r.per_m.assign(m_hi - cfg.D, 0.0);
        parallel_for(r.per_m.size(), workers,
                     [&](std::size_t i) { r.per_m[i] = s0_inner_max(p, cfg.N, cfg.D + i, tab, r.Lambda); });
        r.value = pairwise_sum(r.per_m);
        return r;
    }

    struct VdcResult
    {
        double lhs;
        double rhs;
        bool holds() const { return lhs <= rhs; }
    };

    // |sum_{n, n+d in I} v(n+d) conj(v(n))|.
    inline double correlation(std::span<const cplx> v, std::size_t d)
    {
        if (d >= v.size())
            return 0;
        std::vector<cplx> t(v.size() - d);
        for (std::size_t n = 0; n + d < v.size(); ++n)
            t[n] = v[n + d] * std::conj(v[n]);
        return std::abs(pairwise_sum(t));
    }

    // c[d] = correlation(v, d) for d < |I|; lets a sweep over (H, K) reuse one pass.
    inline std::vector<double> correlation_table(std::span<const cplx> v)
    {
        std::vector<double> c(v.size());
        for (std::size_t d = 0; d < v.size(); ++d)
            c[d] = correlation(v, d);
        return c;
    }

    inline VdcResult vdc_plain_check(std::span<const cplx> v, std::size_t H, const std::vector<double>& corr)
    {
        const std::size_t I = v.size();
        require(H > 0 && H <= I, "need 0 < H <= |I|");
        double s = std::norm(pairwise_sum(v));
        std::vector<double> c(corr.begin() + 1, corr.begin() + H);
        double Id = static_cast<double>(I), Hd = static_cast<double>(H);
        return {s, 2 * Id * Id / Hd + 4 * Id / Hd * pairwise_sum(c)};
    }

    inline VdcResult vdc_plain_check(std::span<const cplx> v, std::size_t H)
    {
        require(H > 0 && H <= v.size(), "need 0 < H <= |I|");
        return vdc_plain_check(v, H, correlation_table(v));
    }

    inline VdcResult vdc_shift_check(std::span<const cplx> v, std::size_t H, std::size_t K, const std::vector<double>& corr)
    {
        const std::size_t I = v.size();
        require(H > 0 && H <= I, "need 0 < H <= |I|");
        require(K >= 1, "need K >= 1");
        double s = std::norm(pairwise_sum(v));
        std::vector<double> c;
        for (std::size_t h = 0; h < H; ++h)
            c.push_back(K * h < I ? corr[K * h] : 0.0);
        double Hd = static_cast<double>(H);
        return {s, 2 * (static_cast<double>(I) + static_cast<double>(K) * (Hd - 1)) / Hd * pairwise_sum(c)};
    }

    inline VdcResult vdc_shift_check(std::span<const cplx> v, std::size_t H, std::size_t K)
    {
        require(H > 0 && H <= v.size(), "need 0 < H <= |I|");
        return vdc_shift_check(v, H, K, correlation_table(v));
    }

    struct CarryResult
    {
        std::uint64_t count;
        Rational bound;
    };

    namespace detail
    {
        inline std::uint64_t floor_affine(i128 pa, i128 da, i128 pb, i128 db, i128 n)
        {
            // floor(pa/da * n + pb/db), all nonnegative
            i128 numer = pa * db * n + pb * da;
            return static_cast<std::uint64_t>(numer / (da * db));
        }
    }

    // Exceptions to s_q(floor(alpha(n+r)+beta)) - s_q(floor(alpha n+beta)) being
    // seen by the lambda lowest digits, for n in [start, start+N).
    inline CarryResult carry_exceptions(unsigned q, unsigned lambda, std::uint64_t r, const Rational& alpha,
                                        const Rational& beta, std::uint64_t start, std::uint64_t N)
    {
        require(q >= 2, "q must be at least 2");
        require(r > 0 && lambda >= 1 && N >= 1, "need r > 0, lambda >= 1, N >= 1");
        require(alpha > 0 && beta >= 0, "need alpha > 0, beta >= 0");
        const BigInt lim = BigInt(1) << 40;
        require(num(alpha) < lim && den(alpha) < lim && num(beta) < lim && den(beta) < lim,
                "alpha, beta components must stay below 2^40");
        require(start + N + r < (1ULL << 40), "interval must stay below 2^40");
        i128 pa = num(alpha).convert_to<long long>(), da = den(alpha).convert_to<long long>();
        i128 pb = num(beta).convert_to<long long>(), db = den(beta).convert_to<long long>();
        std::uint64_t count = 0;
        for (std::uint64_t n = start; n < start + N; ++n)
        {
            std::uint64_t u = detail::floor_affine(pa, da, pb, db, n);
            std::uint64_t v = detail::floor_affine(pa, da, pb, db, n + r);
            long long full = static_cast<long long>(digit_sum_u64(v, q)) - digit_sum_u64(u, q);
            long long trunc = static_cast<long long>(digit_sum_trunc_u64(v, q, lambda)) - digit_sum_trunc_u64(u, q, lambda);
            if (full != trunc)
                ++count;
        }
        Rational bound = Rational(r) * (Rational(N) * alpha / Rational(ipow_big(q, lambda)) + 2);
        ensure(Rational(count) < bound, "carry exception count reached its bound");
        return {count, bound};
    }

    // #{h in [0, q^rho) : h M = a mod q^rho}.
    inline std::uint64_t congruence_solutions(std::uint64_t M, std::uint64_t a, unsigned q, unsigned rho, unsigned gamma)
    {
        require(q >= 2, "q must be at least 2");
        require(rho >= gamma && gamma > 0, "need rho >= gamma > 0");
        const std::uint64_t mod = ipow_u64(q, rho);
        require(a < mod, "need 0 <= a < q^rho");
        for (unsigned p : prime_divisors(q))
            require(M % ipow_u64(p, gamma) != 0, "M divisible by p^gamma for a prime p | q");
        std::uint64_t g = std::gcd(M, mod);
        std::uint64_t count = a % g == 0 ? g : 0;
        ensure(count <= ipow_u64(q, gamma), "solution count exceeds q^gamma");
        return count;
    }

    struct IntegralCheck
    {
        double lhs;
        double rhs;
        double quadrature_error;
        bool holds() const { return lhs <= rhs + quadrature_error; }
    };

    // a holds a_n for n in [x, x + a.size()).
    inline IntegralCheck integral_inequality_check(std::span<const cplx> a, long long x, long long y, std::size_t steps)
    {
        const long long z = x + static_cast<long long>(a.size());
        require(x <= y && y <= z, "need x <= y <= z");
        require(steps >= 1, "need at least one quadrature step");
        std::vector<cplx> head(a.begin(), a.begin() + (y - x));
        double lhs = std::abs(pairwise_sum(head));
        const double A = static_cast<double>(y - x + 1);
        const double h = 1.0 / static_cast<double>(steps);
        std::vector<double> vals(steps);
        std::vector<cplx> terms(a.size());
        for (std::size_t i = 0; i < steps; ++i)
        {
            double xi = (static_cast<double>(i) + 0.5) * h;
            for (std::size_t n = 0; n < a.size(); ++n)
                terms[n] = a[n] * e_of(xi * static_cast<double>(n));
            double dist = std::min(xi, 1 - xi);
            vals[i] = std::min(A, 1 / dist) * std::abs(pairwise_sum(terms)) * h;
        }
        double rhs = pairwise_sum(vals);
        double l1 = 0;
        for (auto v : a)
            l1 += std::abs(v);
        double span = a.empty() ? 0.0 : static_cast<double>(a.size() - 1);
        double lip = A * A * l1 + A * std::numbers::pi * l1 * span;
        return {lhs, rhs, lip * h / 4 + 1e-9 * (1 + rhs)};
    }
}
