#include <iostream>

#include "mcbound/cli.hpp"

int main(int argc, char** argv) { return mcbound::cli::run(argc, argv, std::cout, std::cerr); }
