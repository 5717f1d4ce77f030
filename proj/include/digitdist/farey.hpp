#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"
#include "parallel.hpp"
#include "rational.hpp"

namespace digitdist
{
    struct FareyFraction
    {
        BigInt p = 0;
        BigInt q = 1;
        BigInt order = 1;

        Rational value() const { return Rational(p, q); }
        bool operator==(const FareyFraction&) const = default;
    };

    // a/b <= alpha < c/d, neighbours in F_n translated to R.
    inline std::pair<FareyFraction, FareyFraction> farey_neighbors(const Rational& alpha, const BigInt& n)
    {
        require(n >= 1, "Farey order must be at least 1");
        const BigInt f = floor(alpha);
        const Rational beta = alpha - Rational(f);
        const BigInt P = num(beta), Q = den(beta);
        BigInt a = 0, b = 1, c = 1, d = 1;
        // Stern-Brocot descent, each run of same-side moves taken in one step
        for (;;)
        {
            BigInt tl = (n - d) / b;  // left moves keep c/d -> (ta+c)/(tb+d)
            BigInt gap = P * b - Q * a;
            BigInt room = Q * c - P * d;
            if (gap > 0)
                tl = std::min(tl, BigInt((room + gap - 1) / gap - 1));
            if (tl > 0)
            {
                c += tl * a;
                d += tl * b;
                room = Q * c - P * d;
            }
            BigInt tr = (n - b) / d;  // right moves a/b -> (a+tc)/(b+td)
            tr = std::min(tr, BigInt(gap / room));
            if (tr > 0)
            {
                a += tr * c;
                b += tr * d;
            }
            if (tl <= 0 && tr <= 0)
                break;
        }
        ensure(b * c - a * d == 1, "Farey neighbours with bc - ad != 1");
        ensure(b + d > n, "Farey neighbours with b + d <= n");
        ensure(Rational(a, b) <= beta && beta < Rational(c, d), "alpha outside its Farey interval");
        return {FareyFraction{a + f * b, b, n}, FareyFraction{c + f * d, d, n}};
    }

    inline std::pair<FareyFraction, FareyFraction> farey_neighbors(const Rational& alpha, unsigned long long n)
    {
        return farey_neighbors(alpha, BigInt(n));
    }

    // P_n(alpha)/Q_n(alpha) by the mediant rule.
    inline FareyFraction farey_round(const Rational& alpha, const BigInt& n)
    {
        auto [l, r] = farey_neighbors(alpha, n);
        Rational mediant(l.p + r.p, l.q + r.q);
        return alpha < mediant ? l : r;
    }

    inline FareyFraction farey_round(const Rational& alpha, unsigned long long n) { return farey_round(alpha, BigInt(n)); }

    struct ShiftParams
    {
        unsigned k = 3;
        unsigned mu = 0;
        unsigned sigma = 0;
        std::vector<BigInt> K, M, frakM;  // index i-1 for i = 1 .. k-1
    };

    namespace detail
    {
        inline Rational qpow_r(unsigned q, unsigned e) { return Rational(ipow_big(q, e)); }

        // Allows m = 0, which only bad_set_count needs.
        inline ShiftParams shift_params_raw(const BigInt& m, unsigned q, unsigned mu, unsigned sigma, unsigned k)
        {
            ShiftParams s;
            s.k = k;
            s.mu = mu;
            s.sigma = sigma;
            const BigInt qs = ipow_big(q, sigma);
            const Rational mr(m);
            for (unsigned i = 1; i <= k - 1; ++i)
            {
                BigInt K, M, fM;
                if (i == k - 1)
                {
                    FareyFraction f = farey_round(mr / qpow_r(q, k * mu), ipow_big(q, mu + sigma));
                    K = f.q;
                    M = f.p;
                    fM = farey_round(Rational(f.p) / qpow_r(q, k * mu), qs).p;
                }
                else
                {
                    const unsigned outer = i == 1 ? 2 * mu + 2 * sigma : mu + 2 * sigma;
                    FareyFraction f = farey_round(mr / qpow_r(q, (i + 1) * mu), ipow_big(q, outer));
                    FareyFraction g = farey_round(Rational(f.p) / qpow_r(q, (k - i - 1) * mu), qs);
                    K = f.q * g.q;
                    M = f.p * g.q;
                    fM = g.p;
                }
                s.K.push_back(K);
                s.M.push_back(M);
                s.frakM.push_back(fM);
            }
            return s;
        }
    }

    inline ShiftParams shift_params(const BigInt& m, unsigned q, unsigned mu, unsigned sigma, unsigned k)
    {
        require(q >= 2, "q must be at least 2");
        require(k >= 3, "k must be at least 3");
        require(sigma < mu, "need sigma < mu");
        require(m >= 1, "m must be at least 1");
        ShiftParams s = detail::shift_params_raw(m, q, mu, sigma, k);
        ensure(s.K[0] <= ipow_big(q, 2 * mu + 3 * sigma), "K_1 exceeds q^(2mu+3sigma)");
        for (unsigned i = 2; i <= k - 1; ++i)
            ensure(s.K[i - 1] <= ipow_big(q, mu + 3 * sigma), "K_i exceeds q^(mu+3sigma)");
        return s;
    }

    struct BadSetResult
    {
        std::uint64_t count = 0;
        double ratio = 0;  // |A| q^{3 gamma log_q P^-(q) - (nu+1)}
    };

    inline BadSetResult bad_set_count(unsigned q, unsigned nu, unsigned mu, unsigned sigma, unsigned gamma, unsigned k,
                                      unsigned workers = 1)
    {
        require(q >= 2, "q must be at least 2");
        require(k >= 3, "k must be at least 3");
        require(sigma < mu, "need sigma < mu");
        require(nu + 1 >= 3 * gamma, "need nu + 1 >= 3 gamma");
        const std::uint64_t total = ipow_u64(q, nu + 1);
        Budget::brute().charge(static_cast<long double>(total) * (k - 1) * 64, "bad set enumeration");
        std::vector<BigInt> pw;
        for (unsigned p : prime_divisors(q))
            pw.push_back(ipow_big(p, 3 * gamma));
        std::vector<char> bad(total, 0);
        parallel_for(total, workers, [&](std::size_t m) {
            ShiftParams s = detail::shift_params_raw(BigInt(m), q, mu, sigma, k);
            for (const BigInt& v : s.frakM)
                for (const BigInt& p : pw)
                    if (v % p == 0)
                        bad[m] = 1;
        });
        BadSetResult r;
        r.count = static_cast<std::uint64_t>(std::count(bad.begin(), bad.end(), 1));
        const double pmin = prime_divisors(q).front();
        r.ratio = static_cast<double>(r.count) * std::pow(pmin, 3.0 * gamma) / std::pow(static_cast<double>(q), nu + 1.0);
        return r;
    }

    namespace detail
    {
        // Sorted distinct positions (numerators over den) with multiplicities.
        inline std::vector<std::pair<std::uint64_t, std::uint64_t>> circle_points(const Rational& alpha, std::uint64_t N,
                                                                                std::uint64_t& den_out)
        {
            Rational f = frac(alpha);
            require(den(f) < (BigInt(1) << 62), "denominator of alpha too large");
            const std::uint64_t Q = den(f).convert_to<std::uint64_t>();
            const std::uint64_t P = num(f).convert_to<std::uint64_t>();
            den_out = Q;
            std::vector<std::uint64_t> pos(N);
            for (std::uint64_t n = 0; n < N; ++n)
                pos[n] = static_cast<std::uint64_t>((static_cast<unsigned __int128>(n) * P) % Q);
            std::sort(pos.begin(), pos.end());
            std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
            for (auto v : pos)
            {
                if (!out.empty() && out.back().first == v)
                    ++out.back().second;
                else
                    out.emplace_back(v, 1);
            }
            return out;
        }
    }

    // D_N(alpha) over half-open arcs of the circle. With cumulative counts
    // C_j and positions p_j, the sup equals max_j (C_j/N - p_j) - min_i (C_{i-1}/N - p_i):
    // closed arcs realize count - length, open arcs length - count, and both
    // (wrapping or not) reduce to the same pair difference.
    inline Rational discrepancy(const Rational& alpha, std::uint64_t N)
    {
        require(N >= 1, "N must be at least 1");
        std::uint64_t Q = 1;
        auto pts = detail::circle_points(alpha, N, Q);
        // compare C/N - p/Q in units of 1/(NQ)
        using W = __int128;
        W best_a = std::numeric_limits<long long>::min(), best_b = std::numeric_limits<long long>::max();
        W cum = 0;
        for (auto [p, m] : pts)
        {
            W b = cum * Q - static_cast<W>(p) * N;
            cum += m;
            W a = cum * Q - static_cast<W>(p) * N;
            best_a = std::max(best_a, a);
            best_b = std::min(best_b, b);
        }
        W d = best_a - best_b;
        return Rational(BigInt(i128_to_string(d)), BigInt(N) * Q);
    }

    struct DiscrepancySum
    {
        Rational sum;
        double constant = 0;  // sum N / ((N + q^m) (log+ N)^2)
    };

    inline DiscrepancySum discrepancy_sum(unsigned q, unsigned m, std::uint64_t N, unsigned workers = 1)
    {
        require(q >= 2 && N >= 1, "need q >= 2 and N >= 1");
        const std::uint64_t Qm = ipow_u64(q, m);
        Budget::brute().charge(static_cast<long double>(Qm) * N * (1 + std::log2(static_cast<long double>(N))),
                               "discrepancy sum");
        std::vector<Rational> terms(Qm);
        parallel_for(Qm, workers, [&](std::size_t d) { terms[d] = discrepancy(Rational(BigInt(d), BigInt(Qm)), N); });
        DiscrepancySum r;
        for (const Rational& t : terms)
            r.sum += t;
        const double lp = std::max(1.0, std::log(static_cast<double>(N)));
        r.constant = static_cast<double>(r.sum.convert_to<double>()) * static_cast<double>(N) /
                     ((static_cast<double>(N) + static_cast<double>(Qm)) * lp * lp);
        return r;
    }

    struct NearIntegerResult
    {
        std::uint64_t count = 0;
        Rational bound;
    };

    // #{n < N : ||n alpha + beta|| < H/q^sigma} <= N D_N(alpha) + 2HN/q^sigma.
    inline NearIntegerResult near_integer_count(const Rational& alpha, const Rational& beta, std::uint64_t N,
                                                std::uint64_t H, unsigned sigma, unsigned q)
    {
        require(q >= 2 && N >= 1 && sigma >= 1, "need q >= 2, N >= 1, sigma >= 1");
        require(BigInt(H) < ipow_big(q, sigma - 1), "need H < q^(sigma-1)");
        Budget::brute().charge(static_cast<long double>(N), "near-integer count");
        const Rational thr(BigInt(H), ipow_big(q, sigma));
        NearIntegerResult r;
        for (std::uint64_t n = 0; n < N; ++n)
            if (dist_to_int(Rational(n) * alpha + beta) < thr)
                ++r.count;
        r.bound = Rational(N) * discrepancy(alpha, N) + 2 * Rational(N) * thr;
        ensure(Rational(r.count) <= r.bound, "near-integer count exceeds its discrepancy bound");
        return r;
    }

    struct BoxCountResult
    {
        std::uint64_t count = 0;
        Rational main_term;
        Rational error_ratio;  // |count - N/(LT)| / (N D_N(alpha/L))
    };

    // n in [j0, j1) with {n alpha + beta} in [t/T, (t+1)/T) and floor(n alpha + beta) = l mod L.
    inline BoxCountResult box_count(long long j0, long long j1, const Rational& alpha, const Rational& beta,
                                    std::uint64_t t, std::uint64_t T, std::uint64_t l, std::uint64_t L)
    {
        require(j0 < j1, "interval J must be nonempty");
        require(t < T && l < L, "need 0 <= t < T and 0 <= l < L");
        const std::uint64_t N = static_cast<std::uint64_t>(j1 - j0);
        Budget::brute().charge(static_cast<long double>(N), "box count");
        BoxCountResult r;
        const Rational lo{BigInt(t), BigInt(T)}, hi{BigInt(t + 1), BigInt(T)};
        for (long long n = j0; n < j1; ++n)
        {
            Rational x = Rational(n) * alpha + beta;
            BigInt fl = floor(x);
            Rational fr = x - Rational(fl);
            BigInt res = fl % L;
            if (res < 0)
                res += L;
            if (fr >= lo && fr < hi && res == l)
                ++r.count;
        }
        r.main_term = Rational(BigInt(N), BigInt(L) * T);
        Rational diff = Rational(r.count) - r.main_term;
        if (diff < 0)
            diff = -diff;
        r.error_ratio = diff / (Rational(N) * discrepancy(alpha / Rational(L), N));
        return r;
    }
}
