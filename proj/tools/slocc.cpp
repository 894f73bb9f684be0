#include <iostream>

#include "slocc_cli.hpp"

int main(int argc, char** argv) { return slocc::cli::run(argc, argv, std::cout, std::cerr); }
