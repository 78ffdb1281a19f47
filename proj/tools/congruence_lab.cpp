#include <iostream>

#include "congruence_lab/cli.hpp"

int main(int argc, char** argv) { return congruence_lab::cli_main(argc, argv, std::cout, std::cerr); }
