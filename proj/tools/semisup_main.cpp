#include "semisup/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return semisup::run_cli(argc, argv, std::cout, std::cerr); }
