#include <iostream>
#include <string>
#include <vector>

#include "shillbid/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return shillbid::run_cli(args, std::cout, std::cerr);
}
