#include <iostream>
#include <string>
#include <vector>

#include "setline/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return setline::cli::run(args, std::cout, std::cerr);
}
