#include <iostream>

#include "grasppr/cli.hpp"

int main(int argc, char** argv) { return grasppr::cli::run_cli(argc, argv, std::cout, std::cerr); }
