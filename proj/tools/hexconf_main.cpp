#include "hexconf/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hexconf::cli::run(argc, argv, std::cout, std::cerr); }
