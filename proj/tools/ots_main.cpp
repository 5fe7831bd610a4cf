#include <iostream>

#include "ots/cli.hpp"

int main(int argc, char** argv) {
    return ots::run_cli(argc, argv, std::cout, std::cerr);
}
