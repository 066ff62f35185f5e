#include <iostream>

#include "orbicount/cli.hpp"

int main(int argc, char** argv) { return orbicount::run_cli(argc, argv, std::cout, std::cerr); }
