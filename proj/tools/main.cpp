#include "boxlab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return boxlab::run_cli(argc, argv, std::cout, std::cerr); }
