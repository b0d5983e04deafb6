#include <iostream>

#include "tllc/cli.hpp"

int main(int argc, char** argv) { return tllc::run_cli(argc, argv, std::cout, std::cerr); }
