#include "tollbound/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return tollbound::run_cli(argc, argv, std::cout, std::cerr); }
