#include <iostream>
#include <string>
#include <vector>

#include "blossom_lp/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return blossom_lp::run_cli(args, std::cout, std::cerr);
}
