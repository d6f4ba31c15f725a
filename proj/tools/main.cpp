#include <iostream>

#include "modphi/cli.hpp"

int main(int argc, char** argv) { return modphi::cli::run(argc, argv, std::cout, std::cerr); }
