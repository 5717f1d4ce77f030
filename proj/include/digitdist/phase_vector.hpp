#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "common.hpp"
#include "digitcore.hpp"

namespace digitdist
{
    // Integer coefficients of the n-th cyclotomic polynomial, lowest degree first.
    inline std::vector<long long> cyclotomic(unsigned n)
    {
        // x^n - 1 divided by Phi_d for every proper divisor d.
        std::vector<long long> p(n + 1, 0);
        p[0] = -1;
        p[n] = 1;
        for (unsigned d = 1; d < n; ++d)
        {
            if (n % d)
                continue;
            std::vector<long long> f = cyclotomic(d);
            const std::size_t df = f.size() - 1;
            std::vector<long long> quo(p.size() - df, 0);
            for (std::size_t i = p.size() - 1;; --i)
            {
                long long c = p[i];
                quo[i - df] = c;
                for (std::size_t j = 0; j <= df; ++j)
                    p[i - df + j] -= c * f[j];
                if (i == df)
                    break;
            }
            p = quo;
        }
        return p;
    }

    inline long double to_long_double(const BigInt& x) { return x.convert_to<long double>(); }
    inline long double to_long_double(i128 x) { return static_cast<long double>(x); }
    inline long double to_long_double(long long x) { return static_cast<long double>(x); }

    // Element sum_t c_t e(ell t / b) of the group ring over Z_b.
    template <class T>
    struct PhaseVector
    {
        unsigned b = 2;
        unsigned ell = 1;
        std::vector<T> c;

        PhaseVector() = default;
        PhaseVector(unsigned b_, unsigned ell_) : b(b_), ell(ell_), c(b_, T(0)) {}

        static PhaseVector unit(unsigned b, unsigned ell, unsigned t, T weight = T(1))
        {
            PhaseVector v(b, ell);
            v.c[t % b] = weight;
            return v;
        }

        PhaseVector& operator+=(const PhaseVector& o)
        {
            for (unsigned t = 0; t < b; ++t)
                c[t] += o.c[t];
            return *this;
        }

        PhaseVector& operator-=(const PhaseVector& o)
        {
            for (unsigned t = 0; t < b; ++t)
                c[t] -= o.c[t];
            return *this;
        }

        // this += w * e(ell s / b) * o
        void add_shifted(const PhaseVector& o, unsigned s, const T& w)
        {
            for (unsigned t = 0; t < b; ++t)
            {
                unsigned u = t + s;
                if (u >= b)
                    u -= b;
                c[u] += w * o.c[t];
            }
        }

        PhaseVector shifted(unsigned s) const
        {
            PhaseVector r(b, ell);
            r.add_shifted(*this, s % b, T(1));
            return r;
        }

        PhaseVector operator*(const PhaseVector& o) const
        {
            PhaseVector r(b, ell);
            for (unsigned s = 0; s < b; ++s)
                r.add_shifted(o, s, c[s]);
            return r;
        }

        bool operator==(const PhaseVector&) const = default;

        // Complex value, with every coefficient divided by `denom` first.
        std::complex<long double> value(long double denom = 1) const
        {
            std::complex<long double> z = 0;
            for (unsigned t = 0; t < b; ++t)
            {
                long double a = 2 * std::numbers::pi_v<long double> * ((static_cast<unsigned long long>(ell) * t) % b) / b;
                z += to_long_double(c[t]) / denom * std::complex<long double>(std::cos(a), std::sin(a));
            }
            return z;
        }

        // Exact test that the complex value vanishes: reduce the polynomial in
        // zeta = e(1/b) modulo the b-th cyclotomic polynomial.
        bool is_zero() const
        {
            std::vector<BigInt> poly(b, BigInt(0));
            for (unsigned t = 0; t < b; ++t)
                poly[(static_cast<unsigned long long>(ell) * t) % b] += BigInt(c[t]);
            std::vector<long long> phi = cyclotomic(b);
            const std::size_t deg = phi.size() - 1;
            for (std::size_t i = poly.size(); i-- > deg;)
            {
                BigInt lead = poly[i];
                if (lead == 0)
                    continue;
                for (std::size_t j = 0; j <= deg; ++j)
                    poly[i - deg + j] -= lead * phi[j];
            }
            for (std::size_t i = 0; i < std::min(deg, poly.size()); ++i)
                if (poly[i] != 0)
                    return false;
            return true;
        }
    };
}
