#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace digitdist
{
    using cplx = std::complex<double>;

    // Pairwise (cascade) summation. Error grows like log n instead of n.
    template <class T>
    T pairwise_sum(std::span<const T> xs)
    {
        const std::size_t n = xs.size();
        if (n == 0)
            return T{};
        if (n <= 16)
        {
            T s = xs[0];
            for (std::size_t i = 1; i < n; ++i)
                s += xs[i];
            return s;
        }
        std::size_t h = n / 2;
        return pairwise_sum(xs.first(h)) + pairwise_sum(xs.subspan(h));
    }

    template <class T>
    T pairwise_sum(const std::vector<T>& xs)
    {
        return pairwise_sum(std::span<const T>(xs.data(), xs.size()));
    }

    // e(t/n) for t in [0, n).
    inline std::vector<cplx> roots_of_unity(unsigned n)
    {
        std::vector<cplx> r(n);
        for (unsigned t = 0; t < n; ++t)
        {
            long double a = 2.0L * std::numbers::pi_v<long double> * t / n;
            r[t] = cplx(static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a)));
        }
        return r;
    }

    inline cplx e_of(double x)
    {
        double a = 2.0 * std::numbers::pi * x;
        return {std::cos(a), std::sin(a)};
    }
}
