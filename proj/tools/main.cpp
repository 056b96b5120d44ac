#include <iostream>
#include <string>
#include <vector>

#include "mingain/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return mingain::cli::run(args, std::cin, std::cout, std::cerr);
}
