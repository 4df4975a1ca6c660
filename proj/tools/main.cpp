#include <iostream>
#include <vector>

#include "heisenvt/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return heisenvt::cli::run(std::move(args), std::cout, std::cerr);
}
