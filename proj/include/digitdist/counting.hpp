#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "common.hpp"
#include "digitcore.hpp"
#include "exponents.hpp"
#include "parallel.hpp"
#include "rational.hpp"

namespace digitdist
{
    struct ProgressionQuery
    {
        DigitParams params;
        std::uint64_t y = 0, z = 1;
        unsigned a = 0;
        std::uint64_t m = 1, r = 0;

        void validate() const
        {
            require(y < z, "progression window needs y < z");
            require(a < params.b, "residue a must lie in [0, b)");
            require(m >= 1, "modulus m must be at least 1");
            require(r < m, "residue r must lie in [0, m)");
        }
    };

    // #{ n in [y, z) : s_q(n) = a mod b, n = r mod m }.
    inline std::uint64_t count_progression(const ProgressionQuery& qy)
    {
        qy.validate();
        std::uint64_t first = qy.y + (qy.r + qy.m - qy.y % qy.m) % qy.m;
        std::uint64_t c = 0;
        for (std::uint64_t n = first; n < qy.z; n += qy.m)
            if (digit_sum_u64(n, qy.params.q) % qy.params.b == qy.a)
                ++c;
        return c;
    }

    enum class ErrorMode
    {
        exact_small,
        window
    };

    inline std::string to_string(ErrorMode m) { return m == ErrorMode::exact_small ? "exact-small" : "window"; }

    inline ErrorMode parse_error_mode(const std::string& s)
    {
        if (s == "exact-small")
            return ErrorMode::exact_small;
        if (s == "window")
            return ErrorMode::window;
        throw precondition_error("unknown error mode '" + s + "'");
    }

    struct ErrorSummary
    {
        std::uint64_t m = 1;
        Rational error;
        ErrorMode mode = ErrorMode::window;

        double value() const { return static_cast<double>(error); }
    };

    inline constexpr std::uint64_t exact_small_cap = 1u << 12;

    // E(m) for the residue class a. In exact-small mode the max runs over
    // 0 <= y < z <= 2x with z - y <= x and every r in [0, m); window mode
    // fixes y = 0, z = x and is only a lower bound for the full maximum.
    inline ErrorSummary error_term(const DigitParams& p, unsigned a, std::uint64_t m, std::uint64_t x,
                                   ErrorMode mode, std::uint64_t cap = exact_small_cap)
    {
        require(m >= 1, "modulus m must be at least 1");
        require(x >= 2, "x must be at least 2");
        require(a < p.b, "residue a must lie in [0, b)");
        const BigInt bm = BigInt(p.b) * m;

        if (mode == ErrorMode::window)
        {
            std::vector<std::uint64_t> cnt(std::min<std::uint64_t>(m, x), 0);
            for (std::uint64_t n = 0; n < x; ++n)
                if (digit_sum_u64(n, p.q) % p.b == a)
                    ++cnt[n % m];
            BigInt best = 0;
            for (std::uint64_t r = 0; r < m; ++r)
            {
                BigInt c = r < cnt.size() ? BigInt(cnt[r]) : BigInt(0);
                BigInt d = abs(bm * c - x);
                best = std::max(best, d);
            }
            return {m, Rational(best, bm), mode};
        }

        require(x <= cap, "exact-small mode limited to x <= " + std::to_string(cap));
        const std::uint64_t top = 2 * x;
        std::vector<unsigned char> hit(top);
        for (std::uint64_t n = 0; n < top; ++n)
            hit[n] = digit_sum_u64(n, p.q) % p.b == a;

        // f(n) = b m C_r(n) - n, so the error on [y, z) is |f(z) - f(y)| / (b m).
        const long long scale = static_cast<long long>(p.b * m);
        long long best = 0;
        std::vector<long long> f(top + 1);
        for (std::uint64_t r = 0; r < m; ++r)
        {
            long long c = 0;
            for (std::uint64_t n = 0; n <= top; ++n)
            {
                f[n] = scale * c - static_cast<long long>(n);
                if (n < top && n % m == r && hit[n])
                    ++c;
            }
            std::deque<std::uint64_t> lo, hi;
            for (std::uint64_t z = 1; z <= top; ++z)
            {
                std::uint64_t y = z - 1;
                while (!lo.empty() && f[lo.back()] >= f[y])
                    lo.pop_back();
                lo.push_back(y);
                while (!hi.empty() && f[hi.back()] <= f[y])
                    hi.pop_back();
                hi.push_back(y);
                std::uint64_t ymin = z > x ? z - x : 0;
                while (lo.front() < ymin)
                    lo.pop_front();
                while (hi.front() < ymin)
                    hi.pop_front();
                best = std::max({best, f[z] - f[lo.front()], f[hi.front()] - f[z]});
            }
        }
        return {m, Rational(BigInt(best), bm), mode};
    }

    // Largest integer m with m <= x^{1-eps}.
    inline std::uint64_t level_range(std::uint64_t x, double eps)
    {
        require(eps > 0 && eps < 1, "epsilon must lie in (0, 1)");
        long double t = std::pow(static_cast<long double>(x), 1.0L - eps);
        auto m = static_cast<std::uint64_t>(std::floor(t));
        long double lx = std::log(static_cast<long double>(x)) * (1.0L - eps);
        while (m > 1 && std::log(static_cast<long double>(m)) > lx + 1e-15L)
            --m;
        while (std::log(static_cast<long double>(m + 1)) <= lx + 1e-15L)
            ++m;
        return std::max<std::uint64_t>(m, 1);
    }

    struct LdSum
    {
        Rational total;
        std::uint64_t m_max = 1;
        std::vector<ErrorSummary> per_m;
    };

    inline LdSum ld_error_sum(const DigitParams& p, unsigned a, std::uint64_t x, double eps, ErrorMode mode,
                              unsigned workers = 1, bool breakdown = false)
    {
        LdSum out;
        out.m_max = level_range(x, eps);
        if (mode == ErrorMode::exact_small)
        {
            require(x <= exact_small_cap, "exact-small mode limited to x <= " + std::to_string(exact_small_cap));
            long double work = 2.0L * x * out.m_max * (out.m_max + 1) / 2;
            Budget::enumeration().charge(work, "ld_error_sum");
        }
        std::vector<ErrorSummary> terms(out.m_max);
        parallel_for(out.m_max, workers, [&](std::size_t i) { terms[i] = error_term(p, a, i + 1, x, mode); });
        for (const auto& t : terms)
            out.total += t.error;
        if (breakdown)
            out.per_m = std::move(terms);
        return out;
    }

    struct GelfondResult
    {
        std::vector<std::uint64_t> N;
        std::vector<double> residual;
        double max = 0;
    };

    // Normalized residuals |N_{0,N}(a;r,m) - N/(bm)| / N^lambda for every
    // (a, r) pair in one pass. Index: table[a * m + r].
    inline std::vector<GelfondResult> gelfond_table(const DigitParams& p, std::uint64_t m,
                                                    std::vector<std::uint64_t> N_list)
    {
        require(!N_list.empty(), "N_list must be nonempty");
        require(m >= 1, "modulus m must be at least 1");
        std::sort(N_list.begin(), N_list.end());
        require(N_list.front() >= 1, "N must be positive");
        Budget::enumeration().charge(static_cast<long double>(N_list.back()), "gelfond_table");
        const double lam = gelfond_lambda(p.q, p.b);
        std::vector<GelfondResult> out(p.b * m);
        for (auto& g : out)
            g.N = N_list;
        std::vector<std::uint64_t> cnt(p.b * m, 0);
        std::size_t next = 0;
        for (std::uint64_t n = 0; next < N_list.size(); ++n)
        {
            while (next < N_list.size() && N_list[next] == n)
            {
                double Nd = static_cast<double>(n);
                double norm = std::pow(Nd, lam);
                for (unsigned a = 0; a < p.b; ++a)
                    for (std::uint64_t r = 0; r < m; ++r)
                    {
                        // exact numerator |b m c - N| before the one float division
                        long long num = static_cast<long long>(p.b * m * cnt[a * m + r]) - static_cast<long long>(n);
                        double v = std::abs(static_cast<double>(num)) / static_cast<double>(p.b * m) / norm;
                        auto& g = out[a * m + r];
                        g.residual.push_back(v);
                        g.max = std::max(g.max, v);
                    }
                ++next;
            }
            if (next == N_list.size())
                break;
            ++cnt[(digit_sum_u64(n, p.q) % p.b) * m + n % m];
        }
        return out;
    }

    inline GelfondResult gelfond_residual(const DigitParams& p, std::uint64_t m, std::uint64_t r, unsigned a,
                                          const std::vector<std::uint64_t>& N_list)
    {
        require(r < m && a < p.b, "residues out of range");
        return gelfond_table(p, m, N_list)[a * m + r];
    }
}
