#pragma once

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace digitdist
{
    using BigInt = boost::multiprecision::cpp_int;
    using i128 = __int128;

    // Thrown when an input violates a documented precondition. CLI exit code 1.
    struct precondition_error : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    // Thrown when a computed result breaks a proven bound or identity. CLI exit code 2.
    struct invariant_error : std::logic_error
    {
        using std::logic_error::logic_error;
    };

    // Work-budget rejections are preconditions: the caller asked for too much.
    struct budget_error : precondition_error
    {
        using precondition_error::precondition_error;
    };

    inline void require(bool cond, const std::string& what)
    {
        if (!cond)
            throw precondition_error(what);
    }

    inline void ensure(bool cond, const std::string& what)
    {
        if (!cond)
            throw invariant_error(what);
    }

    // Work caps, in elementary operations. DIGITDIST_BUDGET overrides every default.
    struct Budget
    {
        std::uint64_t limit;

        static std::uint64_t env_override(std::uint64_t fallback)
        {
            if (const char* s = std::getenv("DIGITDIST_BUDGET"))
            {
                char* end = nullptr;
                unsigned long long v = std::strtoull(s, &end, 10);
                if (end != s && *end == '\0' && v > 0)
                    return v;
            }
            return fallback;
        }

        static Budget brute() { return {env_override(20'000'000ULL)}; }
        static Budget graph() { return {env_override(10'000'000ULL)}; }
        static Budget enumeration() { return {env_override(400'000'000ULL)}; }

        void charge(long double work, const std::string& what) const
        {
            if (!(work <= static_cast<long double>(limit)))
                throw budget_error(what + ": work " + std::to_string(static_cast<double>(work)) +
                                   " exceeds budget " + std::to_string(limit));
        }
    };

    // q^e as a 64-bit integer; throws if it does not fit.
    inline std::uint64_t ipow_u64(std::uint64_t q, unsigned e)
    {
        std::uint64_t r = 1;
        for (unsigned i = 0; i < e; ++i)
        {
            if (r > std::numeric_limits<std::uint64_t>::max() / q)
                throw precondition_error("power q^e overflows 64 bits");
            r *= q;
        }
        return r;
    }

    inline BigInt ipow_big(unsigned q, unsigned e)
    {
        BigInt r = 1;
        for (unsigned i = 0; i < e; ++i)
            r *= q;
        return r;
    }

    inline int popcount(std::uint64_t w) { return __builtin_popcountll(w); }

    inline int mod_floor(long long x, long long m)
    {
        long long r = x % m;
        return static_cast<int>(r < 0 ? r + m : r);
    }

    inline std::string i128_to_string(i128 v)
    {
        if (v == 0)
            return "0";
        bool neg = v < 0;
        unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
        std::string s;
        while (u)
        {
            s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
            u /= 10;
        }
        return neg ? "-" + s : s;
    }

    // Distinct prime divisors, ascending.
    inline std::vector<unsigned> prime_divisors(unsigned n)
    {
        std::vector<unsigned> ps;
        for (unsigned p = 2; p * p <= n; ++p)
        {
            if (n % p == 0)
            {
                ps.push_back(p);
                while (n % p == 0)
                    n /= p;
            }
        }
        if (n > 1)
            ps.push_back(n);
        return ps;
    }
}
