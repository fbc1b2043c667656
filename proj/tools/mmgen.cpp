#include <iostream>

#include "mmgen/cli/commands.hpp"

int main(int argc, char** argv) { return mmgen::run_cli(argc, argv, std::cout, std::cerr); }
