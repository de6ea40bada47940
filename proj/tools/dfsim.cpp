#include <iostream>

#include "dfsim/cli.hpp"

int main(int argc, char** argv) { return dfsim::cli_main(argc, argv, std::cout, std::cerr); }
