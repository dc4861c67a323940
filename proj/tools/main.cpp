#include <iostream>

#include "beg/cli.hpp"

int main(int argc, char** argv) { return beg::cli::run(argc, argv, std::cout, std::cerr); }
