#include <iostream>

#include "polyqn/harness.hpp"

int main(int argc, char** argv) {
    return polyqn::run_cli(argc, argv, std::cout, std::cerr);
}
