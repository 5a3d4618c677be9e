#include <iostream>
#include <string>
#include <vector>

#include "multcover/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return multcover::dispatch(args, std::cout, std::cerr);
}
