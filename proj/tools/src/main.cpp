#include <iostream>

#include "rolr/cli.hpp"

int main(int argc, char** argv) { return rolr::run_cli(argc, argv, std::cout, std::cerr); }
