#include <iostream>

#include "halbach/cli.hpp"

int main(int argc, char** argv) { return halbach::run_cli(argc, argv, std::cout, std::cerr); }
