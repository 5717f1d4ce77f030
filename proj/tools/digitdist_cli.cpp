#include <digitdist/cli.hpp>

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return digitdist::dispatch(args);
}
