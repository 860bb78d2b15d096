#include <iostream>

#include "voxflow/cli.hpp"

int main(int argc, char** argv) { return voxflow::cli::run(argc, argv, std::cout, std::cerr); }
