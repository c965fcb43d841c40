#include <iostream>

#include "bwtorder/cli.hpp"

int main(int argc, char** argv) { return bwtorder::cli::run(argc, argv, std::cout, std::cerr); }
