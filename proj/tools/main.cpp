#include <iostream>

#include "mvtk/cli.hpp"

int main(int argc, char** argv) { return mvtk::run_cli(argc, argv, std::cout, std::cerr); }
