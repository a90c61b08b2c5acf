#include <iostream>

#include "discflux/cli.hpp"

int main(int argc, char** argv) { return discflux::run_cli(argc, argv, std::cout, std::cerr); }
