#include <iostream>

#include "feq/cli.hpp"

int main(int argc, char** argv) { return feq::cli_main(argc, argv, std::cout, std::cerr); }
