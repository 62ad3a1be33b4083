#include <iostream>

#include "galmod/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    galmod::cli::Outcome o = galmod::cli::run(std::move(args));
    std::cout << o.out;
    std::cerr << o.err;
    return o.exit_code;
}
