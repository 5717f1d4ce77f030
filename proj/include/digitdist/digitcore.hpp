#pragma once

#include <concepts>
#include <cstdint>
#include <numeric>
#include <string>

#include "common.hpp"

namespace digitdist
{
    // The triple (q, b, ell): base, modulus of the digit sum, and frequency.
    struct DigitParams
    {
        unsigned q = 2;
        unsigned b = 2;
        unsigned ell = 1;

        DigitParams() = default;

        DigitParams(unsigned q_, unsigned b_, unsigned ell_) : q(q_), b(b_), ell(ell_)
        {
            require(q >= 2, "q must be at least 2");
            require(b >= 2, "b must be at least 2");
            require(ell > 0 && ell < b, "ell must satisfy 0 < ell < b");
            require(std::gcd(b, q - 1) == 1, "gcd(b, q-1) must be 1");
        }

        bool operator==(const DigitParams&) const = default;
    };

    // Residue t mod b standing for the unit complex number e(ell*t/b).
    struct PhaseResidue
    {
        unsigned t = 0;
        unsigned b = 2;

        PhaseResidue() = default;
        PhaseResidue(long long value, unsigned modulus) : t(static_cast<unsigned>(mod_floor(value, modulus))), b(modulus) {}

        PhaseResidue operator+(PhaseResidue o) const { return {static_cast<long long>(t) + o.t, b}; }
        PhaseResidue operator-() const { return {static_cast<long long>(b) - t, b}; }
        PhaseResidue operator-(PhaseResidue o) const { return *this + (-o); }
        bool operator==(const PhaseResidue&) const = default;
    };

    template <class Int>
    concept DigitInteger = std::unsigned_integral<Int> || std::same_as<Int, BigInt> || std::signed_integral<Int>;

    template <DigitInteger Int>
    Int digit_sum(Int n, unsigned q)
    {
        Int s = 0;
        const Int qq = q;
        while (n > 0)
        {
            s += n % qq;
            n /= qq;
        }
        return s;
    }

    // Hot-path overload; the template above covers arbitrary precision.
    inline unsigned digit_sum_u64(std::uint64_t n, unsigned q)
    {
        unsigned s = 0;
        if (q == 2)
            return static_cast<unsigned>(popcount(n));
        if (q == 4)
            return static_cast<unsigned>(popcount(n & 0x5555555555555555ULL) + 2 * popcount(n & 0xAAAAAAAAAAAAAAAAULL));
        while (n)
        {
            s += static_cast<unsigned>(n % q);
            n /= q;
        }
        return s;
    }

    template <DigitInteger Int>
    Int unit_digit(const Int& n, unsigned q)
    {
        return n % Int(q);
    }

    // s^alpha(n) = s_q(n mod q^alpha).
    template <DigitInteger Int>
    Int digit_sum_trunc(Int n, unsigned q, unsigned alpha)
    {
        require(alpha >= 1, "truncation length must be at least 1");
        Int s = 0;
        const Int qq = q;
        for (unsigned i = 0; i < alpha && n > 0; ++i)
        {
            s += n % qq;
            n /= qq;
        }
        return s;
    }

    inline unsigned digit_sum_trunc_u64(std::uint64_t n, unsigned q, unsigned alpha)
    {
        unsigned s = 0;
        for (unsigned i = 0; i < alpha && n; ++i)
        {
            s += static_cast<unsigned>(n % q);
            n /= q;
        }
        return s;
    }

    // s^{alpha,beta}(n) = s^beta(n) - s^alpha(n); alpha = 0 means s^0 = 0.
    template <DigitInteger Int>
    Int digit_sum_window(Int n, unsigned q, unsigned alpha, unsigned beta)
    {
        require(beta > alpha, "window requires beta > alpha");
        const Int qq = q;
        for (unsigned i = 0; i < alpha && n > 0; ++i)
            n /= qq;
        Int s = 0;
        for (unsigned i = alpha; i < beta && n > 0; ++i)
        {
            s += n % qq;
            n /= qq;
        }
        return s;
    }

    // Residue of (-1)^{s_2(w)} s_q(n) mod b.
    template <DigitInteger Int>
    PhaseResidue tq_phase(const DigitParams& p, std::uint64_t w, const Int& n)
    {
        Int s = digit_sum(n, p.q) % Int(p.b);
        long long v = static_cast<long long>(s);
        return PhaseResidue(popcount(w) % 2 ? -v : v, p.b);
    }
}
