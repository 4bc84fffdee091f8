#include <iostream>

#include "mabinogion/cli.hpp"

int main(int argc, char** argv) {
    return mab::cli::run(argc, argv, std::cout, std::cerr);
}
