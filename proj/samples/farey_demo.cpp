// Farey neighbours of a rational and the discrepancy of its multiples.
#include <iostream>

#include <digitdist/digitdist.hpp>

using namespace digitdist;

int main()
{
    Rational alpha(355, 1000);
    for (unsigned n : {3u, 10u, 50u})
    {
        auto [l, r] = farey_neighbors(alpha, BigInt(n));
        std::cout << "n=" << n << ": " << l.p << "/" << l.q << " < alpha < " << r.p << "/" << r.q << '\n';
    }
    for (std::uint64_t N : {10, 100, 1000})
        std::cout << "D_" << N << " = " << to_string(discrepancy(alpha, N)) << '\n';
}
