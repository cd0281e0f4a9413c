#include <iostream>
#include <string>
#include <vector>

#include "momenta/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return momenta::execute(args, std::cout, std::cerr);
}
