#include "besovlab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return besovlab::run_cli(argc, argv, std::cout, std::cerr); }
