#include <iostream>

#include "corrbc/cli.hpp"

int main(int argc, char** argv) { return corrbc::run_cli(argc, argv, std::cout, std::cerr); }
