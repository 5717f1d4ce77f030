// Digit-sum residues mod b along a progression, next to the expected share.
#include <iostream>

#include <digitdist/digitdist.hpp>

using namespace digitdist;

int main()
{
    DigitParams p(2, 3, 1);
    for (unsigned a = 0; a < p.b; ++a)
    {
        ProgressionQuery qy{p, 0, 1 << 16, a, 5, 2};
        std::uint64_t c = count_progression(qy);
        std::cout << "s_2(n) = " << a << " mod 3, n = 2 mod 5, n < 65536: " << c << " (share "
                  << static_cast<double>(c) * 5 * p.b / 65536.0 << ")\n";
    }
    std::cout << "gelfond lambda(2,3) = " << gelfond_lambda(2, 3) << '\n';
}
