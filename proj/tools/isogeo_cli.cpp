#include "isogeo/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return isogeo::cli::run(argc, argv, std::cout, std::cerr); }
