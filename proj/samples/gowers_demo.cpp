// Gowers averages from the transition graph, and the contraction constant.
#include <iostream>

#include <digitdist/digitdist.hpp>

using namespace digitdist;

int main()
{
    DigitParams p(2, 2, 1);
    TransitionGraph g = reachable_set(p, 3);
    std::cout << "k=3 reachable nodes: " << g.size() << '\n';
    for (unsigned rho = 1; rho <= 4; ++rho)
    {
        auto v = gowers_average_recursive(p, 3, rho, Node(3), Variant::full);
        std::cout << "rho=" << rho << "  " << static_cast<double>(v.value().real()) << '\n';
    }
    ContractionResult c = contraction(g);
    std::cout << "contraction M=" << static_cast<double>(c.M) << " after j=" << c.j << " steps, certified "
              << c.certified << '\n';
}
