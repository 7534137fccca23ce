#include <iostream>

#include "nomoforge/cli.hpp"

int main(int argc, char** argv) { return nomoforge::run_cli(argc, argv, std::cout, std::cerr); }
