#include <iostream>
#include <string>
#include <vector>

#include "toricstab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return toricstab::dispatch(args, std::cout, std::cerr);
}
