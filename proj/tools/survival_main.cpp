#include <iostream>
#include <string>
#include <vector>

#include "survival/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return survival::cli_dispatch(args, std::cout, std::cerr);
}
