#include <iostream>

#include "selfopt/harness/cli.hpp"

int main(int argc, char** argv) {
    return selfopt::harness::run_cli(argc, argv, std::cout, std::cerr);
}
