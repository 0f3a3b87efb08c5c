#include "gnewton/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return gnewton::cli::run_cli(argc, argv, std::cout, std::cerr); }
