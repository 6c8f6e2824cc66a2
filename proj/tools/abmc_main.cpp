#include <iostream>

#include "abmc/cli.hpp"

int main(int argc, char** argv) { return abmc::cli::run(argc, argv, std::cout, std::cerr); }
