#include <iostream>

#include "adiclab/cli.hpp"

int main(int argc, char** argv) { return adiclab::cli_main(argc, argv, std::cout, std::cerr); }
