#include <iostream>

#include "zdet/cli.hpp"

int main(int argc, char** argv) { return zdet::run_cli(argc, argv, std::cout, std::cerr); }
