#include "h10/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return h10::cli::run(argc, argv, std::cout, std::cerr);
}
