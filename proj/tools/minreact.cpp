#include "minreact/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return minreact::cli::main(argc, argv, std::cout, std::cerr); }
