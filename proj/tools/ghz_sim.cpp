#include <iostream>

#include "ghzsim/cli.hpp"

int main(int argc, char** argv) { return ghzsim::cli::run(argc, argv, std::cout, std::cerr); }
