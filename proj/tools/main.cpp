#include <iostream>

#include "uniharm/cli.hpp"

int main(int argc, char** argv) { return uniharm::cli::run(argc, argv, std::cout, std::cerr); }
